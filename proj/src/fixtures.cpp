#include "rmab/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmab {

namespace {

using Rewards = std::vector<std::array<double, 2>>;

// Circulant dynamics on four states; the active kernel is the transpose
// of the passive one and rewards do not depend on the action.
ArmModel circular4() {
    Matrix p0 = {{0.5, 0.0, 0.0, 0.5},
                 {0.5, 0.5, 0.0, 0.0},
                 {0.0, 0.5, 0.5, 0.0},
                 {0.0, 0.0, 0.5, 0.5}};
    Matrix p1(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) p1[i][j] = p0[j][i];
    }
    Rewards r = {{-1.0, -1.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}};
    return make_arm(4, p0, p1, r, 0.9);
}

// Restart dynamics: passive drifts the state up one level (capped at K)
// and resets with probability 0.1; active always resets. The passive
// reward decays geometrically with the state.
ArmModel restart(int k, double base) {
    Matrix p0(k, std::vector<double>(k, 0.0));
    for (int s = 0; s < k; ++s) {
        p0[s][0] += 0.1;
        p0[s][std::min(s + 1, k - 1)] += 0.9;
    }
    Matrix p1(k, std::vector<double>(k, 0.0));
    for (int s = 0; s < k; ++s) p1[s][0] = 1.0;
    Rewards r(k, {0.0, 0.0});
    for (int s = 0; s < k; ++s) r[s][0] = std::pow(base, s + 1);
    return make_arm(k, p0, p1, r, 0.9);
}

ArmModel randomwalk5() {
    Matrix p0 = {{0.3, 0.7, 0.0, 0.0, 0.0},
                 {0.1, 0.2, 0.7, 0.0, 0.0},
                 {0.0, 0.1, 0.2, 0.7, 0.0},
                 {0.0, 0.0, 0.1, 0.2, 0.7},
                 {0.0, 0.0, 0.0, 0.3, 0.7}};
    Rewards r(5, {0.0, 0.0});
    for (int s = 0; s < 5; ++s) r[s][1] = std::pow(0.9, s + 1);
    return make_arm(5, p0, p0, r, 0.9);
}

ArmModel akbarzadeh3() {
    // The published first passive row sums to 0.9998; it is rescaled to a
    // proper distribution here (the optimal policies at the benchmark
    // subsidies are unaffected).
    Matrix p0 = {{0.3629, 0.5026, 0.1343},
                 {0.0823, 0.7534, 0.1643},
                 {0.2460, 0.0294, 0.7246}};
    for (auto& row : p0) {
        double sum = 0.0;
        for (double p : row) sum += p;
        for (double& p : row) p /= sum;
    }
    Matrix p1 = {{0.1719, 0.1749, 0.6532},
                 {0.0547, 0.9317, 0.0136},
                 {0.1547, 0.6271, 0.2182}};
    Rewards r = {{0.0, 0.44138}, {0.0, 0.8033}, {0.0, 0.14257}};
    return make_arm(3, p0, p1, r, 0.9);
}

ArmModel ninomora3_indexable() {
    Matrix p0 = {{0.1810, 0.4801, 0.3389},
                 {0.2676, 0.2646, 0.4678},
                 {0.5304, 0.2843, 0.1853}};
    Matrix p1 = {{0.2841, 0.4827, 0.2332},
                 {0.5131, 0.0212, 0.4657},
                 {0.4612, 0.0081, 0.5307}};
    Rewards r = {{0.0, 0.9016}, {0.0, 0.10949}, {0.0, 0.01055}};
    return make_arm(3, p0, p1, r, 0.9);
}

ArmModel ninomora3_nonindexable() {
    Matrix p0 = {{0.1902, 0.4156, 0.3942},
                 {0.5676, 0.4191, 0.0133},
                 {0.0191, 0.1097, 0.8712}};
    Matrix p1 = {{0.7796, 0.0903, 0.1301},
                 {0.1903, 0.1863, 0.6234},
                 {0.2901, 0.3901, 0.3198}};
    Rewards r = {{0.458, 0.9631}, {0.5308, 0.7963}, {0.6873, 0.1057}};
    return make_arm(3, p0, p1, r, 0.9);
}

Matrix fivestate_p0() {
    return {{0.1502, 0.0400, 0.4156, 0.0300, 0.3642},
            {0.4000, 0.3500, 0.0800, 0.1200, 0.0500},
            {0.5276, 0.0400, 0.3991, 0.0200, 0.0133},
            {0.0500, 0.1000, 0.1500, 0.2000, 0.5000},
            {0.0191, 0.0100, 0.0897, 0.0300, 0.8512}};
}

Matrix fivestate_p1() {
    return {{0.7196, 0.0500, 0.0903, 0.0100, 0.1301},
            {0.5500, 0.2000, 0.0500, 0.0800, 0.1200},
            {0.1903, 0.0100, 0.1663, 0.0100, 0.6234},
            {0.2000, 0.0500, 0.1500, 0.1000, 0.5000},
            {0.2501, 0.0100, 0.3901, 0.0300, 0.3198}};
}

ArmModel fivestate(Rewards r, double beta) {
    return make_arm(5, fivestate_p0(), fivestate_p1(), std::move(r), beta);
}

ArmModel fivestate_nonindexable() {
    return fivestate({{0.4580, 0.9631},
                      {0.5100, 0.8100},
                      {0.5308, 0.7963},
                      {0.6710, 0.1061},
                      {0.6873, 0.1057}},
                     0.9);
}

Rewards mod1_rewards() {
    return {{0.4580, 0.9631},
            {0.5100, 0.8100},
            {0.6508, 0.7963},
            {0.6710, 0.6061},
            {0.6873, 0.5057}};
}

ArmModel fivestate_mod1() { return fivestate(mod1_rewards(), 0.9); }

ArmModel fivestate_mod2() {
    return fivestate({{0.4580, 0.5057},
                      {0.5100, 0.6061},
                      {0.6508, 0.7963},
                      {0.6710, 0.8100},
                      {0.6873, 0.9631}},
                     0.9);
}

ArmModel fivestate_beta99() { return fivestate(mod1_rewards(), 0.99); }

// ---- arms of the policy-comparison instances (shared discount 0.99) ----

// Builds up charge while idle; playing harvests a charge-dependent reward
// and resets it.
ArmModel arm_charge4() {
    Matrix p0 = {{0.45, 0.55, 0.0, 0.0},
                 {0.0, 0.45, 0.55, 0.0},
                 {0.0, 0.0, 0.45, 0.55},
                 {0.0, 0.0, 0.0, 1.0}};
    Matrix p1(4, std::vector<double>(4, 0.0));
    for (auto& row : p1) row[0] = 1.0;
    Rewards r = {{0.0, 0.05}, {0.0, 0.30}, {0.0, 0.60}, {0.0, 1.00}};
    return make_arm(4, p0, p1, r, 0.99);
}

// Nearly static two-state arm with a solid playing reward.
ArmModel arm_steady2() {
    Matrix p = {{0.95, 0.05}, {0.05, 0.95}};
    Rewards r = {{0.0, 0.50}, {0.0, 0.55}};
    return make_arm(2, p, p, r, 0.99);
}

// Earns almost as much while idle as while played; its playing reward
// looks attractive but the margin over resting is small.
ArmModel arm_sideline2() {
    Matrix p = {{0.9, 0.1}, {0.1, 0.9}};
    Rewards r = {{0.45, 0.58}, {0.50, 0.63}};
    return make_arm(2, p, p, r, 0.99);
}

// Restart arm whose passive income decays as the state drifts up.
ArmModel arm_decay5() {
    Matrix p0(5, std::vector<double>(5, 0.0));
    for (int s = 0; s < 5; ++s) {
        p0[s][0] += 0.1;
        p0[s][std::min(s + 1, 4)] += 0.9;
    }
    Matrix p1(5, std::vector<double>(5, 0.0));
    for (auto& row : p1) row[0] = 1.0;
    Rewards r(5, {0.0, 0.05});
    for (int s = 0; s < 5; ++s) r[s][0] = std::pow(0.9, s + 1);
    return make_arm(5, p0, p1, r, 0.99);
}

// Symmetric three-state walk, identical kernels for both actions.
ArmModel arm_walk3() {
    Matrix p = {{0.6, 0.4, 0.0}, {0.3, 0.4, 0.3}, {0.0, 0.4, 0.6}};
    Rewards r = {{0.0, 0.15}, {0.0, 0.40}, {0.0, 0.70}};
    return make_arm(3, p, p, r, 0.99);
}

struct ArmEntry {
    const char* name;
    ArmModel (*build)();
};

ArmModel restart5() { return restart(5, 0.9); }
ArmModel restart10() { return restart(10, 0.95); }
ArmModel restart100() { return restart(100, 0.99); }

constexpr ArmEntry kArms[] = {
    {"circular4", circular4},
    {"restart5", restart5},
    {"restart10", restart10},
    {"restart100", restart100},
    {"randomwalk5", randomwalk5},
    {"akbarzadeh3", akbarzadeh3},
    {"ninomora3-indexable", ninomora3_indexable},
    {"ninomora3-nonindexable", ninomora3_nonindexable},
    {"fivestate-nonindexable", fivestate_nonindexable},
    {"fivestate-indexable-mod1", fivestate_mod1},
    {"fivestate-indexable-mod2", fivestate_mod2},
    {"fivestate-indexable-beta99", fivestate_beta99},
};

struct InstancePart {
    const char* name;
    ArmModel (*build)();
};

const std::vector<InstancePart>& instance_parts(const std::string& name) {
    static const std::vector<InstancePart> rmab3 = {
        {"charge4", arm_charge4}, {"steady2", arm_steady2}, {"sideline2", arm_sideline2}};
    static const std::vector<InstancePart> rmab5 = {{"charge4", arm_charge4},
                                                    {"steady2", arm_steady2},
                                                    {"sideline2", arm_sideline2},
                                                    {"decay5", arm_decay5},
                                                    {"walk3", arm_walk3}};
    if (name == "rmab3") return rmab3;
    if (name == "rmab5") return rmab5;
    throw std::invalid_argument("unknown instance fixture \"" + name + "\"");
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& e : kArms) names.push_back(e.name);
    return names;
}

bool is_fixture(const std::string& name) {
    for (const auto& e : kArms) {
        if (name == e.name) return true;
    }
    return false;
}

ArmModel load_fixture(const std::string& name) {
    for (const auto& e : kArms) {
        if (name == e.name) return e.build();
    }
    throw std::invalid_argument("unknown fixture \"" + name + "\"");
}

std::vector<std::string> instance_fixture_names() { return {"rmab3", "rmab5"}; }

bool is_instance_fixture(const std::string& name) { return name == "rmab3" || name == "rmab5"; }

RmabInstance load_instance_fixture(const std::string& name) {
    RmabInstance instance;
    for (const auto& part : instance_parts(name)) instance.arms.push_back(part.build());
    instance.plays_per_step = 1;
    instance.discount = instance.arms[0].discount;
    instance.validate();
    return instance;
}

ModelFile fixture_model_file(const std::string& name) {
    ModelFile file;
    if (is_fixture(name)) {
        file.arms.push_back({name, load_fixture(name)});
        return file;
    }
    if (is_instance_fixture(name)) {
        InstanceSpec spec;
        for (const auto& part : instance_parts(name)) {
            file.arms.push_back({part.name, part.build()});
            spec.arm_names.push_back(part.name);
        }
        spec.plays_per_step = 1;
        file.instance = spec;
        return file;
    }
    throw std::invalid_argument("unknown fixture \"" + name + "\"");
}

}  // namespace rmab
