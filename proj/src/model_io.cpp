#include "rmab/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rmab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ModelParseError(msg); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing field \"" + key + "\"");
    return *it;
}

double number_at(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + ": expected a number");
    return v.get<double>();
}

Matrix matrix_at(const json& v, int k, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != k) {
        fail(where + ": expected " + std::to_string(k) + " rows");
    }
    Matrix m(k, std::vector<double>(k));
    for (int s = 0; s < k; ++s) {
        const json& row = v[s];
        if (!row.is_array() || static_cast<int>(row.size()) != k) {
            fail(where + " row " + std::to_string(s + 1) + ": expected " + std::to_string(k) +
                 " entries");
        }
        for (int t = 0; t < k; ++t) m[s][t] = number_at(row[t], where + " row " + std::to_string(s + 1));
    }
    return m;
}

// Rows are accepted when they sum to 1 within 1e-6 and are rescaled to
// sum to 1 exactly; anything further off is rejected.
void normalize_rows(Matrix& m, const std::string& where) {
    for (std::size_t s = 0; s < m.size(); ++s) {
        double sum = 0.0;
        for (double p : m[s]) {
            if (!(p >= 0.0 && p <= 1.0 + 1e-6)) {
                fail(where + " row " + std::to_string(s + 1) + ": entry outside [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            std::ostringstream os;
            os << where << " row " << (s + 1) << ": sums to " << sum
               << ", beyond the 1e-6 stochasticity tolerance";
            fail(os.str());
        }
        for (double& p : m[s]) p /= sum;
    }
}

NamedArm parse_arm(const json& j, int position) {
    const std::string where = "arms[" + std::to_string(position) + "]";
    if (!j.is_object()) fail(where + ": expected an object");

    NamedArm named;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) {
        named.name = it->get<std::string>();
    } else {
        named.name = "arm" + std::to_string(position + 1);
    }

    const json& jk = require(j, "num_states", where);
    if (!jk.is_number_integer() || jk.get<int>() < 1) {
        fail(where + ".num_states: expected a positive integer");
    }
    const int k = jk.get<int>();

    ArmModel& arm = named.model;
    arm.num_states = k;
    arm.passive_transitions =
        matrix_at(require(j, "passive_transitions", where), k, where + ".passive_transitions");
    arm.active_transitions =
        matrix_at(require(j, "active_transitions", where), k, where + ".active_transitions");
    normalize_rows(arm.passive_transitions, where + ".passive_transitions");
    normalize_rows(arm.active_transitions, where + ".active_transitions");

    const json& jr = require(j, "rewards", where);
    if (!jr.is_array() || static_cast<int>(jr.size()) != k) {
        fail(where + ".rewards: expected " + std::to_string(k) + " rows");
    }
    arm.rewards.resize(k);
    for (int s = 0; s < k; ++s) {
        const json& row = jr[s];
        if (!row.is_array() || row.size() != 2) {
            fail(where + ".rewards row " + std::to_string(s + 1) + ": expected [passive, active]");
        }
        for (int a = 0; a < 2; ++a) {
            arm.rewards[s][a] = number_at(row[a], where + ".rewards row " + std::to_string(s + 1));
            if (!std::isfinite(arm.rewards[s][a])) {
                fail(where + ".rewards row " + std::to_string(s + 1) + ": not finite");
            }
        }
    }

    arm.discount = number_at(require(j, "discount", where), where + ".discount");
    if (!(arm.discount > 0.0 && arm.discount < 1.0)) {
        fail(where + ".discount: must lie strictly inside (0,1)");
    }

    try {
        arm.validate(named.name);
    } catch (const std::invalid_argument& e) {
        fail(where + ": " + e.what());
    }
    return named;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

ModelFile parse_model(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte);
        fail("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
             ": " + e.what());
    }
    if (!root.is_object()) fail("top level: expected an object");

    ModelFile file;
    const json& jv = require(root, "format_version", "top level");
    if (!jv.is_number_integer()) fail("format_version: expected an integer");
    file.format_version = jv.get<int>();
    if (file.format_version != 1) {
        fail("format_version " + std::to_string(file.format_version) + " is not supported");
    }

    const json& jarms = require(root, "arms", "top level");
    if (!jarms.is_array() || jarms.empty()) fail("arms: expected a non-empty array");
    for (std::size_t i = 0; i < jarms.size(); ++i) {
        file.arms.push_back(parse_arm(jarms[i], static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < file.arms.size(); ++i) {
        for (std::size_t j = i + 1; j < file.arms.size(); ++j) {
            if (file.arms[i].name == file.arms[j].name) {
                fail("arms: duplicate arm name \"" + file.arms[i].name + "\"");
            }
        }
    }

    if (auto it = root.find("instance"); it != root.end()) {
        const json& ji = *it;
        if (!ji.is_object()) fail("instance: expected an object");
        InstanceSpec spec;
        const json& names = require(ji, "arms", "instance");
        if (!names.is_array() || names.empty()) fail("instance.arms: expected a non-empty array");
        for (const auto& n : names) {
            if (!n.is_string()) fail("instance.arms: expected arm names");
            spec.arm_names.push_back(n.get<std::string>());
        }
        const json& jm = require(ji, "plays_per_step", "instance");
        if (!jm.is_number_integer() || jm.get<int>() < 1) {
            fail("instance.plays_per_step: expected a positive integer");
        }
        spec.plays_per_step = jm.get<int>();

        double shared_discount = 0.0;
        for (const auto& name : spec.arm_names) {
            const NamedArm* found = nullptr;
            for (const auto& arm : file.arms) {
                if (arm.name == name) {
                    found = &arm;
                    break;
                }
            }
            if (!found) fail("instance.arms: unknown arm \"" + name + "\"");
            if (shared_discount == 0.0) {
                shared_discount = found->model.discount;
            } else if (found->model.discount != shared_discount) {
                fail("instance.arms: arm \"" + name + "\" has discount " +
                     format_double(found->model.discount) + ", instance requires " +
                     format_double(shared_discount));
            }
        }
        if (spec.plays_per_step > static_cast<int>(spec.arm_names.size())) {
            fail("instance.plays_per_step exceeds the number of arms");
        }
        file.instance = std::move(spec);
    }
    return file;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot read model file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_model(buf.str());
    } catch (const ModelParseError& e) {
        fail(path + ": " + e.what());
    }
}

namespace {

// Shortest decimal representation that parses back to the same double.
std::string round_trip_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

void append_row(std::string& out, const std::vector<double>& row) {
    out += '[';
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ", ";
        out += round_trip_double(row[i]);
    }
    out += ']';
}

}  // namespace

// Hand-rolled writer so that each matrix row stays on one line; the
// output is ordinary JSON and is the canonical form used for digests.
std::string serialize_model(const ModelFile& file) {
    std::string out;
    out += "{\n";
    out += "  \"format_version\": " + std::to_string(file.format_version) + ",\n";
    out += "  \"arms\": [\n";
    for (std::size_t i = 0; i < file.arms.size(); ++i) {
        const NamedArm& named = file.arms[i];
        out += "    {\n";
        out += "      \"name\": " + json(named.name).dump() + ",\n";
        out += "      \"num_states\": " + std::to_string(named.model.num_states) + ",\n";
        out += "      \"discount\": " + round_trip_double(named.model.discount) + ",\n";
        auto matrix_block = [&](const char* key, const Matrix& m, bool trailing_comma) {
            out += "      \"";
            out += key;
            out += "\": [\n";
            for (std::size_t s = 0; s < m.size(); ++s) {
                out += "        ";
                append_row(out, m[s]);
                out += (s + 1 < m.size()) ? ",\n" : "\n";
            }
            out += "      ]";
            out += trailing_comma ? ",\n" : "\n";
        };
        matrix_block("passive_transitions", named.model.passive_transitions, true);
        matrix_block("active_transitions", named.model.active_transitions, true);
        out += "      \"rewards\": [\n";
        for (std::size_t s = 0; s < named.model.rewards.size(); ++s) {
            out += "        ";
            append_row(out, {named.model.rewards[s][0], named.model.rewards[s][1]});
            out += (s + 1 < named.model.rewards.size()) ? ",\n" : "\n";
        }
        out += "      ]\n";
        out += (i + 1 < file.arms.size()) ? "    },\n" : "    }\n";
    }
    out += "  ]";
    if (file.instance) {
        out += ",\n  \"instance\": {\n";
        out += "    \"arms\": [";
        for (std::size_t i = 0; i < file.instance->arm_names.size(); ++i) {
            if (i) out += ", ";
            out += json(file.instance->arm_names[i]).dump();
        }
        out += "],\n";
        out += "    \"plays_per_step\": " + std::to_string(file.instance->plays_per_step) + "\n";
        out += "  }";
    }
    out += "\n}\n";
    return out;
}

RmabInstance build_instance(const ModelFile& file) {
    RmabInstance instance;
    if (file.instance) {
        for (const auto& name : file.instance->arm_names) {
            for (const auto& arm : file.arms) {
                if (arm.name == name) {
                    instance.arms.push_back(arm.model);
                    break;
                }
            }
        }
        instance.plays_per_step = file.instance->plays_per_step;
    } else {
        if (file.arms.size() != 1) {
            fail("model file has several arms but no instance block");
        }
        instance.arms.push_back(file.arms[0].model);
        instance.plays_per_step = 1;
    }
    instance.discount = instance.arms[0].discount;
    instance.validate();
    return instance;
}

std::string digest64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_policy_csv(const PolicyMatrix& pm, std::ostream& out) {
    out << "state";
    for (double lambda : pm.grid.points) out << ',' << format_double(lambda);
    out << '\n';
    for (int s = 0; s < pm.num_states(); ++s) {
        out << (s + 1);
        for (int a : pm.actions[s]) out << ',' << a;
        out << '\n';
    }
}

void write_index_csv(const IndexReport& report, std::ostream& out) {
    out << "state,index,flags\n";
    if (report.indexable) {
        for (std::size_t s = 0; s < report.whittle_index.size(); ++s) {
            out << (s + 1) << ',';
            switch (report.flags[s]) {
                case IndexFlag::above_grid:
                    out << ",above-grid";
                    break;
                case IndexFlag::at_or_below_grid:
                    out << format_double(report.whittle_index[s]) << ",at-or-below-grid";
                    break;
                case IndexFlag::none:
                    out << format_double(report.whittle_index[s]) << ',';
                    break;
            }
            out << '\n';
        }
        return;
    }
    // Non-indexable: no indices exist; states with a 1->0->1 dip carry
    // their first witness subsidies.
    for (int s = 1; s <= report.num_states; ++s) {
        const Witness* w = nullptr;
        for (const auto& cand : report.witnesses) {
            if (cand.state == s) {
                w = &cand;
                break;
            }
        }
        out << s << ",,";
        if (w) {
            out << "witness(" << format_double(w->lambda_active_low) << ';'
                << format_double(w->lambda_passive) << ';' << format_double(w->lambda_active_high)
                << ')';
        } else {
            out << "non-indexable";
        }
        out << '\n';
    }
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
    out << "t,mean,stderr\n";
    for (std::size_t t = 0; t < trace.per_step_mean.size(); ++t) {
        out << t << ',' << format_double(trace.per_step_mean[t]) << ','
            << format_double(trace.per_step_stderr[t]) << '\n';
    }
}

namespace {

template <typename Fn>
void write_file(const std::string& path, Fn writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write to \"" + path + "\" failed");
}

}  // namespace

void write_policy_csv_file(const PolicyMatrix& pm, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_policy_csv(pm, out); });
}

void write_index_csv_file(const IndexReport& report, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_index_csv(report, out); });
}

void write_trace_csv_file(const SimulationTrace& trace, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_trace_csv(trace, out); });
}

}  // namespace rmab
