#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmab/arm_model.hpp"
#include "rmab/indexability.hpp"
#include "rmab/policies.hpp"
#include "rmab/simulate.hpp"

namespace rmab {

// Parse or validation failure; the message carries line/column for syntax
// errors and the offending field path otherwise.
struct ModelParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NamedArm {
    std::string name;
    ArmModel model;
};

// Optional multi-arm block of a model file: arm names (repeats allowed)
// plus the per-step play budget. All referenced arms must share one
// discount factor.
struct InstanceSpec {
    std::vector<std::string> arm_names;
    int plays_per_step = 1;
};

// In-memory form of a model file (schema documented in the README).
struct ModelFile {
    int format_version = 1;
    std::vector<NamedArm> arms;
    std::optional<InstanceSpec> instance;
};

// Parses and validates the JSON model format. Transition rows whose sums
// deviate from 1 by at most 1e-6 are renormalized; larger deviations are
// rejected with the row named.
ModelFile parse_model(const std::string& text);
ModelFile load_model_file(const std::string& path);

// Canonical serialization: sorted keys, two-space indent, shortest
// round-trip doubles. parse(serialize(m)) reproduces m exactly.
std::string serialize_model(const ModelFile& file);

// Assembles the instance block (or the lone arm when no block is present)
// into a simulatable RmabInstance.
RmabInstance build_instance(const ModelFile& file);

// FNV-1a 64 over a byte string, as 16 hex chars. Used to pin fixtures and
// key index-cache sidecars.
std::string digest64(const std::string& bytes);

// CSV emission. All floating-point values are written with 12 significant
// digits and every row ends with a line feed.
void write_policy_csv(const PolicyMatrix& pm, std::ostream& out);
void write_index_csv(const IndexReport& report, std::ostream& out);
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
void write_policy_csv_file(const PolicyMatrix& pm, const std::string& path);
void write_index_csv_file(const IndexReport& report, const std::string& path);
void write_trace_csv_file(const SimulationTrace& trace, const std::string& path);

}  // namespace rmab
