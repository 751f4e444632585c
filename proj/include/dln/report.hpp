#pragma once

#include "dln/bounds.hpp"
#include "dln/experiments.hpp"
#include "dln/l1.hpp"
#include "dln/nullspace.hpp"
#include "dln/solvers.hpp"

#include <json.hpp>

#include <string>

namespace dln {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Instance& inst);  // A row-major with dims [N, d]
Json to_json(const L1Certificate& c);
Json to_json(const NspConstants& c);
Json to_json(const BoundReport& r);
Json to_json(const SolveTrace& t);
Json sweep_summary(const SweepResult& r);

Vector vector_from_json(const Json& j);
Instance instance_from_json(const Json& j);

Json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace dln
