#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kron/dynamics.hpp"
#include "kron/systems.hpp"
#include "kron/verify.hpp"

namespace kron {

/// Matrices travel as flat row-major arrays of exact "p/q" strings.
nlohmann::json matrix_to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const nlohmann::json& a, std::size_t rows, std::size_t cols);

/// {"dims": {"s","k","l"}, "Z": [...], "L": [...]}
nlohmann::json structure_spec_to_json(const StructureSpec& spec);
StructureSpec structure_spec_from_json(const nlohmann::json& doc);

/// The system document exchanged between CLI subcommands: kind, dims,
/// structure blocks, constants as rational strings, h as grammar text.
nlohmann::json system_to_json(const SystemModel& system);
SystemModel system_from_json(const nlohmann::json& doc);

nlohmann::json claim_to_json(const ClaimReport& report);
std::string claims_to_table(const std::vector<ClaimReport>& reports);
nlohmann::json diophantine_to_json(const DiophantineReport& report);

/// Header "t,u1,..,phi1,..,p1,..,q1,..", unwrapped angles, 17 significant
/// digits. A blow-up stop appends a trailing "# stop=blowup ..." comment.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

nlohmann::json trajectory_diagnostics(const Trajectory& traj);

IntegratorConfig integrator_config_from_json(const nlohmann::json& doc);
ScanConfig scan_config_from_json(const nlohmann::json& doc);
DomainSpec domain_from_json(const nlohmann::json& doc);

TorusKind torus_kind_from_name(const std::string& name);

}  // namespace kron
