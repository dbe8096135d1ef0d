#pragma once

// Self-simulation-advantage calculator: closed-form digital-simulation cost
// models for several physical platforms, reference hardware profiles,
// itemized physical energy budgets, and the advantage ratios
// PAC_t = (simulation time) / (physical time) and
// PAC_e = (simulation energy) / (physical energy).
//
// All inputs are SI (seconds, hertz, joules); the parse_* helpers normalize
// unit-suffixed strings ("330 pJ", "33 ps", "800 THz") exactly. Logarithms in
// the op counts are base 2.

#include "pat/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pat::ssa {

struct HardwareProfile {
    std::string name;
    double energy_per_op_j = 0.0;
    double ops_per_second = 0.0;
};

// 39 pJ/op at 2.8e15 op/s.
HardwareProfile dgx_superpod();
// 9.8 pJ/op at 32e12 op/s (half precision).
HardwareProfile titan_rtx();
const std::vector<HardwareProfile>& reference_hardware();

// ---- op-count formulas ---------------------------------------------------------

// Coupled nonlinear dynamical system: ops ~ dT * df * N * Q_max with
// Q_max = max_i M_i^i over the (order, coupling range) terms.
struct GeneralSystemSpec {
    double delta_t_s = 0.0;
    double delta_f_hz = 0.0;
    double n_modes = 0.0;
    std::vector<std::pair<int, double>> coupling;  // (nonlinearity order i, range M_i)
};
double q_max(const GeneralSystemSpec& spec);
double general_complexity(const GeneralSystemSpec& spec);

// Single-mode split-step pulse propagation: ops ~ N_z * N_w * log2(N_w),
// N_z = L / L_step, N_w = time window x spectral range. The nonlinear-rate
// fields (gamma, f(P)) enter step-size selection in practice, not this count;
// they are carried as documentation only.
struct SplitStepSpec {
    double length_m = 0.0;
    double step_m = 0.0;
    double spectral_range_hz = 0.0;
    double time_window_s = 0.0;
    std::string nonlinearity_note;  // e.g. "quadratic, f(P) = sqrt(P)"
};
double splitstep_ops(const SplitStepSpec& spec);

// Multimode wave propagation: [N_x log2(N_x)]^2 * N_w log2(N_w) * L / L_step.
double multimode_ops(double n_x, double n_omega, double length_m, double step_m);

// Locally-nonlinear oscillator network: dT * df * (N*M + N).
double oscillator_ops(double delta_t_s, double delta_f_hz, double n, double m);

// Analog transistor network: dT * df * (N_T*N_d*M1 + N_T*N_d*C_nl).
double transistor_ops(double delta_t_s, double delta_f_hz, double n_t, double n_d, double m1,
                      double c_nl);

// ---- advantage ratios -------------------------------------------------------------

struct PacResult {
    double sim_time_s = 0.0;
    double sim_energy_j = 0.0;
    double pac_t = 0.0;  // sim time / physical time
    double pac_e = 0.0;  // sim energy / physical energy
};
PacResult pac(double ops, const HardwareProfile& hw, double physical_time_s,
              double physical_energy_j);

// ---- energy budgets ------------------------------------------------------------------

struct BudgetItem {
    std::string label;
    double count = 1.0;
    double unit_energy_j = 0.0;
};

struct EnergyBudget {
    std::vector<BudgetItem> items;
    double total_j = 0.0;
};
EnergyBudget energy_budget(std::vector<BudgetItem> items);

// Exact SI-prefix parsing; DomainError on unknown units.
double parse_energy(const std::string& text);     // "50 nJ" -> 5e-8
double parse_time(const std::string& text);       // "33 ps" -> 3.3e-11
double parse_frequency(const std::string& text);  // "800 THz" -> 8e14

// ---- operational-bottleneck ceiling -----------------------------------------------------

// Upper bound on any physical speed/energy gain: total equivalent ops divided
// by the operations that must stay digital (read-in, read-out, other digital).
double bottleneck_gain(double n_equivalent_ops, double n_read_in, double n_read_out,
                       double n_digital);

// ---- presets -------------------------------------------------------------------------------

// One paper-paragraph scenario: a simulation op count and/or a physical cost.
struct SsaPreset {
    std::string name;
    std::string note;
    std::optional<double> ops;
    std::optional<double> quoted_ops;  // set when the text rounds the formula value
    std::optional<EnergyBudget> budget;
    std::optional<double> physical_time_s;
    std::optional<double> physical_energy_j;  // defaults to the budget total
    std::optional<double> bottleneck_max_gain;
};

const std::vector<SsaPreset>& presets();
const SsaPreset* find_preset(const std::string& name);

// Report with inputs echoed, ops, PAC per hardware profile, and the itemized
// budget. The JSON form is machine-readable; the table is for stdout.
std::string report_json(const SsaPreset& p);
std::string report_table(const SsaPreset& p);

}  // namespace pat::ssa
