#include "esampling/config.hpp"

#include "esampling/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace esampling {

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                     : source + ": " + message),
      line_(line) {}

ConfigFile ConfigFile::parse(std::istream& in, std::string source) {
    ConfigFile file;
    file.source = std::move(source);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = csv::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(file.source, line_no, "expected 'key = value'");
        }
        const std::string key(csv::trim(line.substr(0, eq)));
        const std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError(file.source, line_no, "missing key");
        }
        if (value.empty()) {
            throw ConfigError(file.source, line_no, "missing value for '" + key + "'");
        }
        if (!known_config_keys().contains(key)) {
            throw ConfigError(file.source, line_no, "unknown key '" + key + "'");
        }
        if (const auto it = file.entries.find(key); it != file.entries.end()) {
            throw ConfigError(file.source, line_no,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(it->second.line) + ")");
        }
        file.entries.emplace(key, Entry{value, line_no});
    }
    return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), 0, "cannot open config file");
    }
    return parse(in, path.string());
}

std::size_t ConfigFile::line_of(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
}

const std::map<std::string, std::string>& known_config_keys() {
    static const std::map<std::string, std::string> keys = {
        {"signal.amplitude_v", "sine amplitude V_M (V)"},
        {"signal.frequency_hz", "sine frequency (Hz); exclusive with signal.m_cycles"},
        {"signal.m_cycles", "coherent cycle count m; f_in = m * f_s / n_fft"},
        {"signal.phase_rad", "sine phase (rad)"},
        {"signal.dc_offset_v", "sine dc offset (V)"},
        {"signal.source_resistance_ohm", "source resistance for rms power (ohm)"},
        {"signal.p_in_w", "configured rms input power (W), overrides the computed value"},
        {"signal.stimulus_csv", "piecewise-linear stimulus file (time_s,volts)"},
        {"clock.f_s_hz", "sampling frequency (Hz)"},
        {"clock.alpha", "acquisition fraction T_aq / T_s"},
        {"clock.n_periods", "minimum number of sampling periods"},
        {"switch.s1.type", "settled | constant | pass | ideal"},
        {"switch.s1.r_on", "S1 on-resistance (ohm), type = constant"},
        {"switch.s1.k_gain", "S1 mu*Cox*W/L (A/V^2), type = pass"},
        {"switch.s1.v_th", "S1 threshold (V), type = pass"},
        {"switch.s1.v_gate", "S1 gate voltage (V), type = pass"},
        {"switch.s2.type", "constant | pass | ideal"},
        {"switch.s2.r_on", "S2 on-resistance (ohm), type = constant"},
        {"switch.s2.k_gain", "S2 mu*Cox*W/L (A/V^2), type = pass"},
        {"switch.s2.v_th", "S2 threshold (V), type = pass"},
        {"switch.s2.v_gate", "S2 gate voltage (V), type = pass"},
        {"adc.n_bits", "resolution n"},
        {"adc.v_ref", "full scale is [-v_ref, +v_ref) (V)"},
        {"adc.c_unit_f", "DAC unit capacitor C_u (F)"},
        {"eh.c_eh_f", "storage capacitor C_EH (F)"},
        {"eh.v_drop_v", "rectifier conduction drop (V)"},
        {"eh.r_series_ohm", "rectifier conduction-path resistance (ohm)"},
        {"eh.steady_tol", "settling tolerance as a fraction of V_EH"},
        {"engine.n_sub", "sub-steps per phase segment"},
        {"engine.n_fft", "FFT record length (power of two)"},
        {"engine.max_periods", "upper bound on simulated periods"},
        {"engine.settling_factor_k", "k in k * R_ON * C_DAC <= T_aq"},
        {"engine.seed", "reserved seed for randomized studies"},
        {"output.dir", "output directory"},
        {"output.metrics", "comma list of adc, eh"},
        {"output.trace_stride", "write every Nth trace sample"},
    };
    return keys;
}

namespace {

class Reader {
public:
    explicit Reader(const ConfigFile& file) : file_(file) {}

    [[nodiscard]] bool has(const std::string& key) const { return file_.entries.contains(key); }

    [[nodiscard]] const std::string* raw(const std::string& key) const {
        const auto it = file_.entries.find(key);
        return it == file_.entries.end() ? nullptr : &it->second.value;
    }

    void real(const std::string& key, double& out) const {
        if (const auto* v = raw(key)) {
            try {
                out = csv::parse_double(*v);
            } catch (const std::invalid_argument&) {
                fail(key, "expected a number, got '" + *v + "'");
            }
            if (!std::isfinite(out)) {
                fail(key, "value must be finite");
            }
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) const {
        if (const auto* v = raw(key)) {
            Int parsed{};
            auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
            if (ec != std::errc{} || ptr != v->data() + v->size()) {
                fail(key, "expected an integer, got '" + *v + "'");
            }
            out = parsed;
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ConfigError(file_.source, file_.line_of(key), key + ": " + message);
    }

private:
    const ConfigFile& file_;
};

SwitchModel read_switch(const Reader& r, const std::string& prefix, SwitchModel fallback,
                        bool& settled) {
    const std::string type_key = prefix + ".type";
    std::string type;
    if (const auto* v = r.raw(type_key)) {
        type = *v;
    } else if (r.has(prefix + ".r_on")) {
        type = "constant";
    } else if (r.has(prefix + ".k_gain")) {
        type = "pass";
    }

    auto reject_extra = [&](std::initializer_list<const char*> fields) {
        for (const char* f : fields) {
            if (r.has(prefix + "." + f)) {
                r.fail(prefix + "." + f, std::string("not used by switch type '") + type + "'");
            }
        }
    };

    settled = false;
    if (type.empty()) {
        settled = prefix == "switch.s1";
        return fallback;
    }
    if (type == "settled") {
        if (prefix != "switch.s1") {
            r.fail(type_key, "'settled' applies to the sampling switch S1 only");
        }
        reject_extra({"r_on", "k_gain", "v_th", "v_gate"});
        settled = true;
        return fallback;
    }
    if (type == "ideal") {
        reject_extra({"r_on", "k_gain", "v_th", "v_gate"});
        return IdealSwitch{};
    }
    if (type == "constant") {
        reject_extra({"k_gain", "v_th", "v_gate"});
        if (!r.has(prefix + ".r_on")) {
            r.fail(type_key, "constant switch needs " + prefix + ".r_on");
        }
        ConstantRSwitch s;
        r.real(prefix + ".r_on", s.r_on);
        return s;
    }
    if (type == "pass") {
        reject_extra({"r_on"});
        PassTransistorSwitch s;
        r.real(prefix + ".k_gain", s.k_gain);
        r.real(prefix + ".v_th", s.v_th);
        r.real(prefix + ".v_gate", s.v_gate);
        return s;
    }
    r.fail(type_key, "unknown switch type '" + type + "'");
}

}  // namespace

RunConfig to_run_config(const ConfigFile& file, const std::filesystem::path& base_dir) {
    const Reader r(file);
    RunConfig cfg;
    Scenario& sc = cfg.scenario;

    if (r.has("signal.stimulus_csv")) {
        for (const char* k : {"signal.amplitude_v", "signal.frequency_hz", "signal.m_cycles",
                              "signal.phase_rad", "signal.dc_offset_v"}) {
            if (r.has(k)) {
                r.fail(k, "not allowed together with signal.stimulus_csv");
            }
        }
        std::filesystem::path p = *r.raw("signal.stimulus_csv");
        if (p.is_relative() && !base_dir.empty()) {
            p = base_dir / p;
        }
        try {
            sc.source = TabulatedSource::from_csv_file(p);
        } catch (const ValidationError& e) {
            r.fail("signal.stimulus_csv", e.what());
        }
    } else {
        SineSource sine;
        r.real("signal.amplitude_v", sine.amplitude);
        r.real("signal.phase_rad", sine.phase);
        r.real("signal.dc_offset_v", sine.dc_offset);
        r.real("signal.source_resistance_ohm", sine.source_resistance);
        if (r.has("signal.frequency_hz") && r.has("signal.m_cycles")) {
            r.fail("signal.m_cycles", "give either signal.frequency_hz or signal.m_cycles");
        }
        r.real("signal.frequency_hz", sine.frequency);
        if (r.has("signal.m_cycles")) {
            std::uint32_t m = 0;
            r.integer("signal.m_cycles", m);
            sc.coherent_cycles = m;
        }
        sc.source = sine;
    }
    if (r.has("signal.p_in_w")) {
        double p = 0.0;
        r.real("signal.p_in_w", p);
        sc.p_in_override = p;
    }

    r.real("clock.f_s_hz", sc.clock.f_s);
    r.real("clock.alpha", sc.clock.alpha);
    r.integer("clock.n_periods", sc.clock.n_periods);

    r.integer("adc.n_bits", sc.adc.n_bits);
    r.real("adc.v_ref", sc.adc.v_ref);
    r.real("adc.c_unit_f", sc.adc.c_unit);

    bool s1_settled = true;
    bool unused = false;
    sc.adc.s1 = read_switch(r, "switch.s1", sc.adc.s1, s1_settled);
    sc.s1_from_settling = s1_settled;
    sc.eh.s2 = read_switch(r, "switch.s2", sc.eh.s2, unused);

    r.real("eh.c_eh_f", sc.eh.c_eh);
    r.real("eh.v_drop_v", sc.eh.rectifier.v_drop);
    r.real("eh.r_series_ohm", sc.eh.rectifier.r_series);
    r.real("eh.steady_tol", sc.eh.steady_tol);

    r.integer("engine.n_sub", sc.n_sub);
    r.integer("engine.n_fft", sc.n_fft);
    r.integer("engine.max_periods", sc.max_periods);
    r.integer("engine.seed", sc.seed);
    if (r.has("engine.settling_factor_k")) {
        double k = 0.0;
        r.real("engine.settling_factor_k", k);
        sc.settling_factor_k = k;
    }

    if (const auto* dir = r.raw("output.dir")) {
        cfg.output_dir = *dir;
    }
    r.integer("output.trace_stride", cfg.trace_stride);
    if (cfg.trace_stride < 1) {
        r.fail("output.trace_stride", "must be >= 1");
    }
    if (const auto* metrics = r.raw("output.metrics")) {
        sc.want_adc_metrics = false;
        sc.want_eh_metrics = false;
        for (auto item : csv::split(*metrics)) {
            if (item == "adc") {
                sc.want_adc_metrics = true;
            } else if (item == "eh") {
                sc.want_eh_metrics = true;
            } else {
                r.fail("output.metrics", "unknown metric set '" + std::string(item) + "'");
            }
        }
    }

    try {
        sc = resolve(sc);
        validate(sc);
        if (sc.want_eh_metrics) {
            (void)input_power(sc);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(file.source, file.line_of(e.key()), e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const auto file = ConfigFile::load(path);
    return to_run_config(file, path.parent_path());
}

}  // namespace esampling
