#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qgan/adversary.hpp"
#include "qgan/generator.hpp"
#include "qgan/harness.hpp"
#include "qgan/initfit.hpp"

namespace qgan::serialize {

// Discriminator checkpoint: packed parameters plus the two scalar knobs.
nlohmann::json discriminator_to_json(const adversary::Discriminator& disc);
adversary::Discriminator discriminator_from_json(const nlohmann::json& doc);

// Circuit document: n_qubits, k, init mode tag, angle arrays, permutation.
nlohmann::json circuit_to_json(const generator::GeneratorCircuit& circuit);
generator::GeneratorCircuit circuit_from_json(const nlohmann::json& doc);

// {"angles": [...radians...], "permutation": [...]}
nlohmann::json init_spec_to_json(const initfit::InitSpec& spec);
initfit::InitSpec init_spec_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const harness::TrainConfig& config);
// Rejects unknown keys.
harness::TrainConfig config_from_json(const nlohmann::json& doc);

// CSV trace: epoch,loss_g,loss_d,rel_entropy (header row, epoch 0 first).
void write_run_csv(std::ostream& out, const harness::RunRecord& record);

// Sidecar holding everything needed to reproduce the run.
nlohmann::json run_sidecar_json(const harness::TrainConfig& config,
                                const harness::RunRecord& record);

// Table rows: data,init,k,mean,std,min (plus bookkeeping columns).
void write_sweep_csv(std::ostream& out, const harness::SweepSummary& summary);

} // namespace qgan::serialize
