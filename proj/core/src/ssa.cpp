#include "pat/ssa/ssa.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace pat::ssa {

HardwareProfile dgx_superpod() { return {"dgx-superpod", 39e-12, 2.8e15}; }
HardwareProfile titan_rtx() { return {"titan-rtx", 9.8e-12, 32e12}; }

const std::vector<HardwareProfile>& reference_hardware() {
    static const std::vector<HardwareProfile> hw = {titan_rtx(), dgx_superpod()};
    return hw;
}

// ---- formulas -----------------------------------------------------------------

double q_max(const GeneralSystemSpec& spec) {
    if (spec.coupling.empty()) throw ConfigError("general_complexity: no coupling terms");
    double best = 0.0;
    for (const auto& [order, range] : spec.coupling) {
        if (order < 1 || range <= 0.0) throw ConfigError("general_complexity: bad coupling term");
        best = std::max(best, std::pow(range, order));
    }
    return best;
}

double general_complexity(const GeneralSystemSpec& spec) {
    if (spec.delta_t_s <= 0.0 || spec.delta_f_hz <= 0.0 || spec.n_modes <= 0.0) {
        throw ConfigError("general_complexity: all inputs must be positive");
    }
    return spec.delta_t_s * spec.delta_f_hz * spec.n_modes * q_max(spec);
}

double splitstep_ops(const SplitStepSpec& spec) {
    if (spec.length_m <= 0.0 || spec.step_m <= 0.0 || spec.spectral_range_hz <= 0.0 ||
        spec.time_window_s <= 0.0) {
        throw ConfigError("splitstep_ops: all inputs must be positive");
    }
    const double n_z = spec.length_m / spec.step_m;
    const double n_omega = spec.time_window_s * spec.spectral_range_hz;
    if (n_z < 1.0 || n_omega < 2.0) throw ConfigError("splitstep_ops: degenerate grid");
    return n_z * n_omega * std::log2(n_omega);
}

double multimode_ops(double n_x, double n_omega, double length_m, double step_m) {
    if (n_x < 2.0 || n_omega < 2.0 || length_m <= 0.0 || step_m <= 0.0) {
        throw ConfigError("multimode_ops: bad inputs");
    }
    const double spatial = n_x * std::log2(n_x);
    return spatial * spatial * n_omega * std::log2(n_omega) * (length_m / step_m);
}

double oscillator_ops(double delta_t_s, double delta_f_hz, double n, double m) {
    if (delta_t_s <= 0.0 || delta_f_hz <= 0.0 || n <= 0.0 || m < 0.0) {
        throw ConfigError("oscillator_ops: bad inputs");
    }
    return delta_t_s * delta_f_hz * (n * m + n);
}

double transistor_ops(double delta_t_s, double delta_f_hz, double n_t, double n_d, double m1,
                      double c_nl) {
    if (delta_t_s <= 0.0 || delta_f_hz <= 0.0 || n_t <= 0.0 || n_d <= 0.0 || m1 < 0.0 ||
        c_nl < 0.0) {
        throw ConfigError("transistor_ops: bad inputs");
    }
    return delta_t_s * delta_f_hz * (n_t * n_d * m1 + n_t * n_d * c_nl);
}

PacResult pac(double ops, const HardwareProfile& hw, double physical_time_s,
              double physical_energy_j) {
    if (ops <= 0.0 || physical_time_s <= 0.0 || physical_energy_j <= 0.0 ||
        hw.energy_per_op_j <= 0.0 || hw.ops_per_second <= 0.0) {
        throw ConfigError("pac: all inputs must be positive");
    }
    PacResult r;
    r.sim_time_s = ops / hw.ops_per_second;
    r.sim_energy_j = ops * hw.energy_per_op_j;
    r.pac_t = r.sim_time_s / physical_time_s;
    r.pac_e = r.sim_energy_j / physical_energy_j;
    return r;
}

EnergyBudget energy_budget(std::vector<BudgetItem> items) {
    EnergyBudget b;
    b.items = std::move(items);
    for (const auto& it : b.items) {
        if (it.count < 0.0 || it.unit_energy_j < 0.0) {
            throw ConfigError("energy_budget: negative entry '" + it.label + "'");
        }
        b.total_j += it.count * it.unit_energy_j;
    }
    return b;
}

// ---- unit parsing -----------------------------------------------------------------

namespace {

double parse_with_units(const std::string& text, const std::map<std::string, double>& units,
                        const char* what) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str()) throw DomainError(std::string(what) + ": no number in '" + text + "'");
    std::string unit(end);
    while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
    while (!unit.empty() && unit.back() == ' ') unit.pop_back();
    const auto it = units.find(unit);
    if (it == units.end()) throw DomainError(std::string(what) + ": unknown unit '" + unit + "'");
    return value * it->second;
}

}  // namespace

double parse_energy(const std::string& text) {
    static const std::map<std::string, double> units = {
        {"J", 1.0},    {"mJ", 1e-3}, {"uJ", 1e-6}, {"µJ", 1e-6}, {"nJ", 1e-9},
        {"pJ", 1e-12}, {"fJ", 1e-15}, {"aJ", 1e-18}};
    return parse_with_units(text, units, "parse_energy");
}

double parse_time(const std::string& text) {
    static const std::map<std::string, double> units = {
        {"s", 1.0},    {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6},
        {"ns", 1e-9},  {"ps", 1e-12}, {"fs", 1e-15}};
    return parse_with_units(text, units, "parse_time");
}

double parse_frequency(const std::string& text) {
    static const std::map<std::string, double> units = {
        {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
    return parse_with_units(text, units, "parse_frequency");
}

double bottleneck_gain(double n_equivalent_ops, double n_read_in, double n_read_out,
                       double n_digital) {
    const double denom = n_read_in + n_read_out + n_digital;
    if (n_equivalent_ops <= 0.0 || denom <= 0.0) throw ConfigError("bottleneck_gain: bad inputs");
    return n_equivalent_ops / denom;
}

// ---- presets --------------------------------------------------------------------------

namespace {

std::vector<SsaPreset> make_presets() {
    std::vector<SsaPreset> out;

    {
        SsaPreset p;
        p.name = "shg-present";
        p.note = "shaped-pulse nonlinear-optics device, present-day components";
        p.budget = energy_budget({{"slm hold (10 W over 33 ps)", 1, parse_energy("330 pJ")},
                                  {"dac", 20, parse_energy("1 pJ")},
                                  {"modulator", 20, parse_energy("1 pJ")},
                                  {"detector+adc", 20, parse_energy("1 pJ")},
                                  {"optical pulse", 1, parse_energy("50 nJ")}});
        p.physical_time_s = parse_time("33 ps");
        p.physical_energy_j = p.budget->total_j;
        SplitStepSpec sim{5e-3, 1e-6, parse_frequency("800 THz"), parse_time("25 ps"),
                          "artificial Kerr (cubic), f(P) = P"};
        p.ops = splitstep_ops(sim);
        p.quoted_ops = 5e8;  // rounded in the source text; formula gives ~1.43e9
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "shg-near-future";
        p.note = "same device with integrated components";
        p.budget = energy_budget({{"slm hold", 1, parse_energy("33 pJ")},
                                  {"dac", 20, parse_energy("0.1 pJ")},
                                  {"modulator", 20, parse_energy("0.1 pJ")},
                                  {"detector+adc", 20, parse_energy("10 fJ")},
                                  {"optical pulse", 1, parse_energy("0.5 nJ")}});
        p.physical_time_s = parse_time("33 ps");
        p.physical_energy_j = p.budget->total_j;
        SplitStepSpec sim{5e-3, 1e-6, parse_frequency("800 THz"), parse_time("25 ps"),
                          "artificial Kerr (cubic), f(P) = P"};
        p.ops = splitstep_ops(sim);
        p.quoted_ops = 5e8;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "multimode-fiber";
        p.note = "nonlinear multimode fiber, 5e6 modes, 100 cm";
        p.ops = multimode_ops(3000, 1e4, 1.0, 25e-6);
        p.physical_time_s = 1.0 / 31e3;  // one DMD frame
        p.physical_energy_j = 106.0 / 31e3;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "linear-multimode";
        p.note = "linear multimode matrix-vector frame: (5e6)^2 ops at 30 kHz, ~6 W";
        p.ops = 5e6 * 5e6;
        p.physical_time_s = 1.0 / 30e3;
        p.physical_energy_j = 6.01 / 30e3;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "oscillator-small";
        p.note = "100 spintronic oscillators, M = 100, 1 ns at 20 GHz";
        p.ops = oscillator_ops(parse_time("1 ns"), parse_frequency("20 GHz"), 100, 100);
        p.budget = energy_budget({{"oscillators (2.5 uW x 100 x 1 ns)", 1, parse_energy("250 fJ")},
                                  {"dac", 2000, parse_energy("1 pJ")},
                                  {"adc", 2000, parse_energy("1 pJ")}});
        p.physical_time_s = parse_time("1 ns");
        p.physical_energy_j = p.budget->total_j;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "oscillator-large";
        p.note = "1e5 oscillators, 100 in/out channels, parameters held in place";
        p.ops = oscillator_ops(parse_time("1 ns"), parse_frequency("20 GHz"), 1e5, 100);
        p.budget = energy_budget({{"hidden oscillators (10 uW x 1e5 x 1 ns)", 1, parse_energy("1 nJ")},
                                  {"dac", 2000, parse_energy("1 pJ")},
                                  {"adc", 2000, parse_energy("1 pJ")}});
        p.physical_time_s = parse_time("1 ns");
        p.physical_energy_j = p.budget->total_j;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "transistor-small";
        p.note = "100 transistors (N_d = 10, M1 = 100, C_nl = 10), 10 ns at 20 GHz";
        p.ops = transistor_ops(parse_time("10 ns"), parse_frequency("20 GHz"), 100, 10, 100, 10);
        p.budget = energy_budget({{"transistors (100 nW x 100 x 10 ns)", 1, parse_energy("1 pJ")},
                                  {"dac+adc (100 ch x 50 samples x 2)", 10000, parse_energy("1 pJ")}});
        p.physical_time_s = parse_time("10 ns");
        p.physical_energy_j = p.budget->total_j;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "transistor-large";
        p.note = "1e3 transistors over 1 ns; same op count, 10x faster physics";
        p.ops = transistor_ops(parse_time("1 ns"), parse_frequency("20 GHz"), 1e3, 10, 100, 10);
        p.physical_time_s = parse_time("1 ns");
        p.physical_energy_j = 10e-9;
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "bottleneck-mnist";
        p.note = "196-d digit task ceiling: 1960 equivalent ops vs 10+196+196 digital ops";
        p.bottleneck_max_gain = bottleneck_gain(1960, 196, 10, 196);
        out.push_back(std::move(p));
    }
    {
        SsaPreset p;
        p.name = "bottleneck-cifar";
        p.note = "32x32x3 image task ceiling: ~1e9 equivalent ops vs 3072 read-in ops";
        p.bottleneck_max_gain = bottleneck_gain(1e9, 32.0 * 32.0 * 3.0, 0.0, 0.0);
        out.push_back(std::move(p));
    }
    return out;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

const std::vector<SsaPreset>& presets() {
    static const std::vector<SsaPreset> all = make_presets();
    return all;
}

const SsaPreset* find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::string report_json(const SsaPreset& p) {
    nlohmann::json j;
    j["name"] = p.name;
    j["note"] = p.note;
    if (p.ops) j["ops"] = *p.ops;
    if (p.quoted_ops) {
        j["quoted_ops"] = *p.quoted_ops;
        if (p.ops) j["formula_over_quoted"] = *p.ops / *p.quoted_ops;
    }
    if (p.budget) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& it : p.budget->items) {
            items.push_back({{"label", it.label}, {"count", it.count}, {"unit_j", it.unit_energy_j}});
        }
        j["budget"] = {{"items", items}, {"total_j", p.budget->total_j}};
    }
    if (p.physical_time_s) j["physical_time_s"] = *p.physical_time_s;
    if (p.physical_energy_j) j["physical_energy_j"] = *p.physical_energy_j;
    if (p.bottleneck_max_gain) j["bottleneck_max_gain"] = *p.bottleneck_max_gain;

    if (p.ops && p.physical_time_s && p.physical_energy_j) {
        nlohmann::json hw_list = nlohmann::json::array();
        for (const auto& hw : reference_hardware()) {
            const PacResult r = pac(*p.ops, hw, *p.physical_time_s, *p.physical_energy_j);
            hw_list.push_back({{"hardware", hw.name},
                               {"sim_time_s", r.sim_time_s},
                               {"sim_energy_j", r.sim_energy_j},
                               {"pac_t", r.pac_t},
                               {"pac_e", r.pac_e}});
        }
        j["advantage"] = hw_list;
    }
    return j.dump(2) + "\n";
}

std::string report_table(const SsaPreset& p) {
    std::ostringstream out;
    out << "preset: " << p.name << "\n  " << p.note << "\n";
    if (p.ops) {
        out << "  simulation ops: " << sci(*p.ops);
        if (p.quoted_ops) {
            out << "  (vs quoted " << sci(*p.quoted_ops) << ", ratio " << sci(*p.ops / *p.quoted_ops)
                << ")";
        }
        out << "\n";
    }
    if (p.budget) {
        out << "  physical energy budget:\n";
        for (const auto& it : p.budget->items) {
            out << "    " << it.label << ": " << sci(it.count) << " x " << sci(it.unit_energy_j)
                << " J\n";
        }
        out << "    total: " << sci(p.budget->total_j) << " J\n";
    }
    if (p.physical_time_s) out << "  physical time: " << sci(*p.physical_time_s) << " s\n";
    if (p.ops && p.physical_time_s && p.physical_energy_j) {
        for (const auto& hw : reference_hardware()) {
            const PacResult r = pac(*p.ops, hw, *p.physical_time_s, *p.physical_energy_j);
            out << "  " << hw.name << ": sim " << sci(r.sim_time_s) << " s / " << sci(r.sim_energy_j)
                << " J, PAC_t " << sci(r.pac_t) << ", PAC_e " << sci(r.pac_e) << "\n";
        }
    }
    if (p.bottleneck_max_gain) {
        out << "  operational-bottleneck max gain: " << sci(*p.bottleneck_max_gain) << "\n";
    }
    return out.str();
}

}  // namespace pat::ssa
