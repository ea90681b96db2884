#pragma once

#include <string>
#include <vector>

#include "rmab/arm_model.hpp"
#include "rmab/model_io.hpp"
#include "rmab/policies.hpp"

namespace rmab {

// Catalog of single-arm benchmark models, constructed programmatically
// from their published parameter matrices.
std::vector<std::string> fixture_names();
bool is_fixture(const std::string& name);
ArmModel load_fixture(const std::string& name);  // throws on unknown name

// Multi-arm instances used by the policy-comparison experiments.
std::vector<std::string> instance_fixture_names();
bool is_instance_fixture(const std::string& name);
RmabInstance load_instance_fixture(const std::string& name);

// Fixture (arm or instance) wrapped as a model file, e.g. for export.
ModelFile fixture_model_file(const std::string& name);

}  // namespace rmab
