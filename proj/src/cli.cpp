#include "esampling/cli.hpp"

#include "esampling/config.hpp"
#include "esampling/csv.hpp"
#include "esampling/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>

namespace esampling::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

fs::path output_dir(const std::string& flag, const fs::path& configured) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("ESAMPLE_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return configured;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void write_trace(const fs::path& path, const TransientTrace& tr, std::size_t stride) {
    auto out = open_output(path);
    out << "t_s,v_in,phase,v_dac,v_ceh\n";
    for (std::size_t i = 0; i < tr.size(); i += stride) {
        out << csv::format_double(tr.t[i]) << ',' << csv::format_double(tr.v_in[i]) << ','
            << to_string(tr.phase[i]) << ',' << csv::format_double(tr.v_dac[i]) << ','
            << csv::format_double(tr.v_ceh[i]) << '\n';
    }
}

void write_codes(const fs::path& path, const TransientTrace& tr) {
    auto out = open_output(path);
    out << "period,code,v_sampled,saturated\n";
    for (const auto& c : tr.codes) {
        out << c.period << ',' << c.code.value << ',' << csv::format_double(c.v_sampled) << ','
            << (c.saturated ? 1 : 0) << '\n';
    }
}

nlohmann::ordered_json summary_json(const SimulationResult& res) {
    const auto& sc = res.scenario;
    nlohmann::ordered_json j;
    j["T_s_s"] = sc.clock.t_s();
    j["T_aq_s"] = sc.clock.t_aq();
    j["T_EH_s"] = sc.clock.t_eh();
    j["alpha"] = sc.clock.alpha;
    if (const auto* sine = std::get_if<SineSource>(&sc.source)) {
        j["f_in_Hz"] = sine->frequency;
    }
    j["V_M_V"] = res.v_m;
    j["n_bits"] = sc.adc.n_bits;
    j["C_DAC_F"] = c_dac(sc.adc);
    j["R_ON_S1_ohm"] = r_on(sc.adc.s1, 0.0);
    j["C_EH_F"] = sc.eh.c_eh;
    j["periods"] = res.periods_run;
    if (res.eh_metrics) {
        const auto& m = *res.eh_metrics;
        j["V_EH_V"] = m.v_eh;
        j["T_CEH_s"] = m.t_ceh;
        j["eta_v"] = m.eta_v;
        j["eta_e"] = m.eta_e;
        j["E_h_J"] = m.e_h;
        j["P_in_W"] = res.p_in.p_in_rms;
        j["P_in_provenance"] = res.p_in.provenance == PowerProvenance::Configured
                                   ? "configured"
                                   : "computed_from_source";
        j["E_delivered_J"] = res.energy_delivered;
    }
    if (res.adc_metrics) {
        // JSON has no infinity; an ideal loopback serializes as null.
        j["SNDR_dB"] = res.adc_metrics->sndr_db;
        j["ENOB"] = res.adc_metrics->enob;
        j["n_fft"] = sc.n_fft;
        j["signal_bin"] = res.spectrum->signal_bin;
    }
    return j;
}

RunConfig load_or_usage(const std::string& path) {
    return load_run_config(path);
}

int cmd_run(const std::string& config_path, const std::string& out_flag, std::ostream& out) {
    const RunConfig cfg = load_or_usage(config_path);
    const auto res = run(cfg.scenario);
    const auto dir = output_dir(out_flag, cfg.output_dir);
    fs::create_directories(dir);
    write_trace(dir / "trace.csv", res.trace, cfg.trace_stride);
    write_codes(dir / "codes.csv", res.trace);
    if (res.spectrum) {
        auto s = open_output(dir / "spectrum.csv");
        write_spectrum_csv(s, *res.spectrum);
    }
    const auto summary = summary_json(res).dump(2);
    open_output(dir / "summary.json") << summary << '\n';
    out << summary << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_text, unsigned jobs, const std::string& out_flag,
              std::ostream& out) {
    const RunConfig cfg = load_or_usage(config_path);
    const auto names = sweep_parameters();
    if (std::find(names.begin(), names.end(), param) == names.end() && param != "r_on(s1)") {
        throw UsageError("unknown sweep parameter '" + param + "'");
    }
    std::vector<double> values;
    try {
        values = parse_values(values_text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--values: ") + e.what());
    }
    const auto rows = sweep(cfg.scenario, param, values, jobs);

    const auto dir = output_dir(out_flag, cfg.output_dir);
    fs::create_directories(dir);
    auto file = open_output(dir / "sweep.csv");
    auto num = [](const std::optional<double>& v) {
        return v ? csv::format_double(*v) : std::string{};
    };
    const std::string header = "param,value,sndr_db,enob,v_eh,t_ceh,eta_v,eta_e,e_h,error\n";
    file << header;
    out << header;
    for (const auto& row : rows) {
        std::string err = row.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::string line = param + ',' + csv::format_double(row.value) + ',' +
                           num(row.adc ? std::optional(row.adc->sndr_db) : std::nullopt) + ',' +
                           num(row.adc ? std::optional(row.adc->enob) : std::nullopt) + ',' +
                           num(row.eh ? std::optional(row.eh->v_eh) : std::nullopt) + ',' +
                           num(row.eh ? std::optional(row.eh->t_ceh) : std::nullopt) + ',' +
                           num(row.eh ? std::optional(row.eh->eta_v) : std::nullopt) + ',' +
                           num(row.eh ? std::optional(row.eh->eta_e) : std::nullopt) + ',' +
                           num(row.eh ? std::optional(row.eh->e_h) : std::nullopt) + ',' + err +
                           '\n';
        file << line;
        out << line;
    }
    return kExitOk;
}

int cmd_analyze(const std::string& codes_path, int n_bits, double v_ref, double f_s,
                std::size_t signal_bin, std::size_t n_fft, const std::string& out_flag,
                std::ostream& out) {
    std::ifstream in(codes_path);
    if (!in) {
        throw UsageError("cannot open " + codes_path);
    }
    csv::Table table;
    try {
        table = csv::read(in);
    } catch (const std::exception& e) {
        throw UsageError(codes_path + ": " + e.what());
    }
    const auto col = std::find(table.header.begin(), table.header.end(), "code");
    if (col == table.header.end()) {
        throw UsageError(codes_path + ": no 'code' column");
    }
    const auto idx = static_cast<std::size_t>(col - table.header.begin());
    if (table.rows.size() < n_fft) {
        throw UsageError(codes_path + ": " + std::to_string(table.rows.size()) +
                         " codes, need n_fft = " + std::to_string(n_fft));
    }
    AdcConfig adc;
    adc.n_bits = n_bits;
    adc.v_ref = v_ref;
    try {
        adc.validate();
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    std::vector<AdcCode> codes(n_fft);
    for (std::size_t i = 0; i < n_fft; ++i) {
        const auto& text = table.rows[i][idx];
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || v > adc.max_code()) {
            throw UsageError(codes_path + ":" + std::to_string(table.line_numbers[i]) +
                             ": invalid code '" + text + "'");
        }
        codes[i] = AdcCode{v};
    }
    Spectrum spec;
    try {
        spec = spectrum(codes, adc, f_s, signal_bin, n_fft);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const double s = sndr(spec);
    const auto dir = output_dir(out_flag, ".");
    fs::create_directories(dir);
    auto file = open_output(dir / "spectrum.csv");
    write_spectrum_csv(file, spec);
    out << "sndr_db=" << csv::format_double(s) << '\n'
        << "enob=" << csv::format_double(enob(s)) << '\n';
    return kExitOk;
}

int cmd_size_cap(double i_load, double t_p, double delta_v, std::ostream& out) {
    double c = 0.0;
    try {
        c = size_capacitor(i_load, t_p, delta_v);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6e", c);
    out << buf.data() << '\n';
    return kExitOk;
}

}  // namespace

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        const auto parts = csv::split(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("range must be start:stop:step");
        }
        const double start = csv::parse_double(parts[0]);
        const double stop = csv::parse_double(parts[1]);
        const double step = csv::parse_double(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("range needs step > 0 and stop >= start");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            // Round to 12 significant digits so 0.05:0.5:0.05 yields 0.15, not 0.15000000000000002.
            const double v = start + static_cast<double>(i) * step;
            std::array<char, 32> buf{};
            std::snprintf(buf.data(), buf.size(), "%.12g", v);
            values.push_back(std::strtod(buf.data(), nullptr));
        }
    } else {
        for (auto item : csv::split(text, ',')) {
            values.push_back(csv::parse_double(item));
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("no values");
    }
    return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"eSampling behavioral simulator: sampling with energy harvesting", "esample"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* run_cmd = app.add_subcommand("run", "simulate one scenario config");
    run_cmd->add_option("config", config_path, "scenario config file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");

    std::string param;
    std::string values_text;
    unsigned jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one scenario parameter");
    sweep_cmd->add_option("config", config_path, "scenario config file")->required();
    sweep_cmd->add_option("--param", param, "alpha | c_eh | v_drop | r_on_s1 | n_bits | f_s")
        ->required();
    sweep_cmd->add_option("--values", values_text, "start:stop:step or v1,v2,...")->required();
    sweep_cmd->add_option("--jobs", jobs, "parallel rows")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", out_dir, "output directory");

    double i_load = 0.0;
    double t_p = 0.0;
    double delta_v = 0.0;
    auto* size_cmd = app.add_subcommand("size-cap", "storage capacitor for a ripple budget");
    size_cmd->add_option("--i-load", i_load, "load current (A)")->required();
    size_cmd->add_option("--t-p", t_p, "time between ripple peaks (s)")->required();
    size_cmd->add_option("--delta-v", delta_v, "tolerated ripple (V)")->required();

    std::string codes_path;
    int n_bits = 8;
    double v_ref = 0.4;
    double f_s = 0.0;
    std::size_t signal_bin = 0;
    std::size_t n_fft = 4096;
    auto* analyze_cmd = app.add_subcommand("analyze", "SNDR/ENOB of a codes.csv record");
    analyze_cmd->add_option("codes", codes_path, "codes CSV (needs a 'code' column)")->required();
    analyze_cmd->add_option("--n-bits", n_bits, "ADC resolution")->required();
    analyze_cmd->add_option("--v-ref", v_ref, "full-scale reference (V)")->required();
    analyze_cmd->add_option("--f-s", f_s, "sampling frequency (Hz)")->required();
    analyze_cmd->add_option("--signal-bin", signal_bin, "coherent signal bin")->required();
    analyze_cmd->add_option("--n-fft", n_fft, "record length (first n_fft codes)");
    analyze_cmd->add_option("--out", out_dir, "output directory for spectrum.csv");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "esample: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(config_path, out_dir, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(config_path, param, values_text, jobs, out_dir, out);
        }
        if (*size_cmd) {
            return cmd_size_cap(i_load, t_p, delta_v, out);
        }
        if (*analyze_cmd) {
            return cmd_analyze(codes_path, n_bits, v_ref, f_s, signal_bin, n_fft, out_dir, out);
        }
    } catch (const ConfigError& e) {
        err << "esample: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "esample: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "esample: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NotConvergedError& e) {
        err << "esample: not converged: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const std::exception& e) {
        err << "esample: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace esampling::cli
