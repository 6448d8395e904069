#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "candlecast/csv_io.hpp"
#include "candlecast/errors.hpp"
#include "candlecast/metrics.hpp"
#include "candlecast/pipeline.hpp"
#include "candlecast/serialize.hpp"
#include "candlecast/simgen.hpp"
#include "report.hpp"

namespace candlecast::cli {

namespace {

namespace fs = std::filesystem;

// Effective settings after layering defaults, the JSON config and flags.
struct Settings {
    std::string scenario;
    std::string input;
    std::string q = "50";
    std::string m = "1";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::optional<std::size_t> p_max;
    double alpha_adf = 0.05;
    double alpha_johansen = 0.05;
    std::size_t workers = 1;
    std::string out;
};

// Raw flag storage; an option only overrides when it was given.
struct Flags {
    std::string config;
    std::string scenario;
    std::string input;
    std::string q;
    std::string m;
    std::uint64_t seed = 0;
    std::size_t p_max = 0;
    double alpha_adf = 0.05;
    double alpha_johansen = 0.05;
    std::size_t workers = 1;
    std::string out;
};

struct Options {
    CLI::Option* scenario = nullptr;
    CLI::Option* input = nullptr;
    CLI::Option* q = nullptr;
    CLI::Option* m = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* p_max = nullptr;
    CLI::Option* alpha_adf = nullptr;
    CLI::Option* alpha_johansen = nullptr;
    CLI::Option* workers = nullptr;
    CLI::Option* out = nullptr;
};

std::string json_scalar_string(const Json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_number_integer() || j.is_number_unsigned()) {
        return std::to_string(j.get<long long>());
    }
    throw DataError("config values for q and m must be integers or range strings");
}

Settings resolve(const Flags& flags, const Options& opts) {
    Settings s;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr) {
        s.out = env;
    }
    if (!flags.config.empty()) {
        std::ifstream in(flags.config);
        if (!in) {
            throw IoError("cannot read config " + flags.config);
        }
        const Json cfg = Json::parse(in, nullptr, false);
        if (cfg.is_discarded() || !cfg.is_object()) {
            throw DataError("config file is not a JSON object: " + flags.config);
        }
        try {
            if (cfg.contains("scenario")) s.scenario = json_scalar_string(cfg["scenario"]);
            if (cfg.contains("input")) s.input = cfg["input"].get<std::string>();
            if (cfg.contains("q")) s.q = json_scalar_string(cfg["q"]);
            if (cfg.contains("m")) s.m = json_scalar_string(cfg["m"]);
            if (cfg.contains("seed")) {
                s.seed = cfg["seed"].get<std::uint64_t>();
                s.seed_given = true;
            }
            if (cfg.contains("p_max")) s.p_max = cfg["p_max"].get<std::size_t>();
            if (cfg.contains("alpha_adf")) s.alpha_adf = cfg["alpha_adf"].get<double>();
            if (cfg.contains("alpha_johansen")) s.alpha_johansen = cfg["alpha_johansen"].get<double>();
            if (cfg.contains("workers")) s.workers = cfg["workers"].get<std::size_t>();
            if (cfg.contains("out")) s.out = cfg["out"].get<std::string>();
        } catch (const Json::exception& e) {
            throw DataError(std::string("bad config value: ") + e.what());
        }
    }
    const auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
    if (given(opts.scenario)) s.scenario = flags.scenario;
    if (given(opts.input)) s.input = flags.input;
    if (given(opts.q)) s.q = flags.q;
    if (given(opts.m)) s.m = flags.m;
    if (given(opts.seed)) {
        s.seed = flags.seed;
        s.seed_given = true;
    }
    if (given(opts.p_max)) s.p_max = flags.p_max;
    if (given(opts.alpha_adf)) s.alpha_adf = flags.alpha_adf;
    if (given(opts.alpha_johansen)) s.alpha_johansen = flags.alpha_johansen;
    if (given(opts.workers)) s.workers = flags.workers;
    if (given(opts.out)) s.out = flags.out;
    if (s.workers < 1) {
        throw DataError("--workers must be at least 1");
    }
    return s;
}

PipelineConfig pipeline_config(const Settings& s) {
    PipelineConfig cfg;
    cfg.alpha_adf = s.alpha_adf;
    cfg.alpha_johansen = s.alpha_johansen;
    cfg.p_max = s.p_max;
    cfg.workers = s.workers;
    cfg.sanitize.rng_seed = s.seed;
    return cfg;
}

ScenarioSpec resolve_scenario(const Settings& s) {
    ScenarioSpec spec;
    const auto& name = s.scenario;
    const bool numeric = !name.empty() && std::all_of(name.begin(), name.end(), ::isdigit);
    if (numeric) {
        spec = scenario_preset(std::stoi(name), s.seed);
    } else if (fs::is_regular_file(name)) {
        std::ifstream in(name);
        const Json doc = Json::parse(in, nullptr, false);
        if (doc.is_discarded()) {
            throw DataError("scenario file is not valid JSON: " + name);
        }
        spec = scenario_from_json(doc);
        if (s.seed_given) {
            spec.seed = s.seed;
        }
        if (spec.name.empty()) {
            spec.name = fs::path(name).stem().string();
        }
    } else {
        throw DataError("unknown scenario '" + name + "'; valid presets are 1, 2, 3 or a scenario JSON file");
    }
    return spec;
}

struct LoadedData {
    std::vector<RawBar> raw;
    std::string tag;
};

LoadedData load_data(const Settings& s) {
    if (!s.input.empty()) {
        auto raw = read_ohlc_csv(s.input);
        if (raw.empty()) {
            throw DataError("input file has no data rows: " + s.input);
        }
        return {std::move(raw), fs::path(s.input).stem().string()};
    }
    if (!s.scenario.empty()) {
        const auto spec = resolve_scenario(s);
        const auto generated = generate(spec);
        return {to_raw(generated.series), spec.name + "_seed" + std::to_string(spec.seed)};
    }
    throw DataError("provide --input FILE or --scenario ID");
}

fs::path output_dir(const Settings& s) { return s.out.empty() ? fs::path("candlecast_out") : fs::path(s.out); }

int cmd_simulate(const Settings& s, std::ostream& out) {
    if (s.scenario.empty()) {
        throw DataError("simulate needs --scenario (valid presets are 1, 2, 3)");
    }
    const auto spec = resolve_scenario(s);
    const auto generated = generate(spec);
    fs::path target = s.out.empty() ? fs::path(spec.name + "_seed" + std::to_string(spec.seed) + ".csv")
                                    : fs::path(s.out);
    if (fs::is_directory(target) || !target.has_extension()) {
        target /= spec.name + "_seed" + std::to_string(spec.seed) + ".csv";
    }
    std::ostringstream csv;
    write_ohlc_csv(csv, generated.series);
    write_file_atomic(target, csv.str());
    fs::path params = target;
    params.replace_extension(".params.json");
    write_file_atomic(params, to_json(spec).dump(2) + "\n");
    out << "wrote " << generated.series.size() << " bars to " << target.string() << " (parameters: " << params.string()
        << ")\n";
    return kExitOk;
}

int cmd_backtest(const Settings& s, std::ostream& out) {
    const auto data = load_data(s);
    const auto qs = parse_range(s.q);
    const auto ms = parse_range(s.m);
    const auto cfg = pipeline_config(s);
    const fs::path dir = output_dir(s);

    const std::size_t length = sanitize_series_report(std::span<const RawBar>(data.raw), cfg.sanitize).series.size();
    for (std::size_t q : qs) {
        for (std::size_t m : ms) {
            WindowSpec{q, m, 1}.validate(length);
        }
    }

    for (std::size_t q : qs) {
        for (std::size_t m : ms) {
            const auto result = rolling_backtest(std::span<const RawBar>(data.raw), WindowSpec{q, m, 1}, cfg);
            const Json doc = backtest_to_json(result, data.tag);
            const std::string stem = data.tag + "_q" + std::to_string(q) + "_m" + std::to_string(m);
            write_file_atomic(dir / (stem + ".json"), doc.dump(1) + "\n");
            write_file_atomic(dir / (stem + ".csv"), backtest_to_csv(result));
            out << stem << ": origins=" << result.origin_count() << " failed=" << result.failed.size()
                << " VAR=" << result.model_counts.var << " VEC=" << result.model_counts.vec
                << " DIFF_VAR=" << result.model_counts.diff_var << "\n";
        }
    }
    // Comparison tables for the settings just written.
    std::vector<Json> docs;
    for (std::size_t q : qs) {
        for (std::size_t m : ms) {
            std::ifstream in(dir / (data.tag + "_q" + std::to_string(q) + "_m" + std::to_string(m) + ".json"));
            docs.push_back(Json::parse(in));
        }
    }
    out << render_comparison_table(data.tag, docs);
    return kExitOk;
}

int cmd_forecast(const Settings& s, std::ostream& out) {
    const auto data = load_data(s);
    const auto qs = parse_range(s.q);
    const auto ms = parse_range(s.m);
    if (qs.size() != 1 || ms.size() != 1) {
        throw DataError("forecast takes a single q and a single m");
    }
    const auto tail = forecast_tail(std::span<const RawBar>(data.raw), qs[0], ms[0], pipeline_config(s));
    Json bars = Json::array();
    for (std::size_t h = 0; h < tail.forecast.forecast_bars.size(); ++h) {
        Json b = to_json(tail.forecast.forecast_bars[h]);
        b["horizon"] = h + 1;
        bars.push_back(std::move(b));
    }
    Json doc = {{"tag", data.tag},
                {"series_length", tail.series_length},
                {"q", qs[0]},
                {"m", ms[0]},
                {"origin", tail.forecast.origin},
                {"model", to_string(tail.forecast.model)},
                {"p", tail.forecast.p},
                {"r", tail.forecast.model == ModelKind::Vec ? Json(tail.forecast.r) : Json(nullptr)},
                {"bars", bars},
                {"sanitization", to_json(tail.sanitize_summary)}};
    doc["sanitization"]["applied"] = tail.sanitize_summary.changed_anything();
    const std::string text = doc.dump(2) + "\n";
    if (!s.out.empty()) {
        write_file_atomic(s.out, text);
    }
    out << text;
    return kExitOk;
}

int cmd_report(const Settings& s, std::ostream& out) {
    const fs::path in_dir = s.input.empty() ? output_dir(s) : fs::path(s.input);
    const fs::path out_dir = s.out.empty() ? in_dir : fs::path(s.out);
    const auto groups = load_backtests(in_dir);
    for (const auto& [tag, docs] : groups) {
        const std::string tables = render_metric_table(tag, docs) + "\n" + render_comparison_table(tag, docs);
        write_file_atomic(out_dir / ("report_" + tag + ".txt"), tables);
        write_file_atomic(out_dir / ("report_" + tag + ".csv"), render_tidy_csv(docs));
        out << tables << "\n";
    }
    return kExitOk;
}

int cmd_validate(const Settings& s, std::ostream& out) {
    if (s.input.empty()) {
        throw DataError("validate needs --input FILE");
    }
    const auto raw = read_ohlc_csv(s.input);
    if (raw.empty()) {
        throw DataError("input file has no data rows: " + s.input);
    }
    std::size_t invalid = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const OhlcBar bar{static_cast<std::int64_t>(i + 1), raw[i].open, raw[i].high, raw[i].low, raw[i].close};
        if (!satisfies_constraints(bar)) {
            ++invalid;
            out << "row " << i + 1 << " (" << raw[i].label << ") violates the OHLC constraints\n";
        }
    }
    out << raw.size() - invalid << " of " << raw.size() << " bars valid\n";
    return invalid == 0 ? kExitOk : kExitUsage;
}

}  // namespace

std::vector<std::size_t> parse_range(const std::string& text) {
    const auto to_int = [&](const std::string& part) -> std::size_t {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &pos);
        } catch (const std::exception&) {
            throw DataError("invalid range '" + text + "'");
        }
        if (pos != part.size() || v < 0) {
            throw DataError("invalid range '" + text + "'");
        }
        return static_cast<std::size_t>(v);
    };
    std::vector<std::size_t> values;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':')) {
            parts.push_back(part);
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw DataError("invalid range '" + text + "'");
        }
        const std::size_t lo = to_int(parts[0]);
        const std::size_t hi = to_int(parts[1]);
        const std::size_t step = parts.size() == 3 ? to_int(parts[2]) : 1;
        if (step == 0 || hi < lo) {
            throw DataError("invalid range '" + text + "'");
        }
        for (std::size_t v = lo; v <= hi; v += step) {
            values.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ',')) {
            values.push_back(to_int(part));
        }
    }
    if (values.empty()) {
        throw DataError("empty range '" + text + "'");
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constraint-safe OHLC forecasting with VAR/VEC models"};
    app.require_subcommand(1);
    Flags flags;

    const auto add_common = [&](CLI::App* sub, Options& opts) {
        sub->add_option("--config", flags.config, "JSON config file (flags override it)");
        opts.seed = sub->add_option("--seed", flags.seed, "RNG seed");
        opts.out = sub->add_option("-o,--out", flags.out, "Output path or directory");
    };
    const auto add_data = [&](CLI::App* sub, Options& opts) {
        opts.scenario = sub->add_option("--scenario", flags.scenario, "Scenario preset (1, 2, 3) or JSON file");
        opts.input = sub->add_option("--input", flags.input, "OHLC CSV file (date,open,high,low,close)");
    };
    const auto add_model = [&](CLI::App* sub, Options& opts) {
        opts.q = sub->add_option("--q", flags.q, "Window length: N, list a,b or range lo:hi[:step]");
        opts.m = sub->add_option("--m", flags.m, "Forecast horizon: N, list or range");
        opts.p_max = sub->add_option("--p-max", flags.p_max, "Largest VAR lag searched by AIC");
        opts.alpha_adf = sub->add_option("--alpha-adf", flags.alpha_adf, "ADF significance (0.01, 0.05, 0.10)");
        opts.alpha_johansen =
            sub->add_option("--alpha-johansen", flags.alpha_johansen, "Johansen significance (0.01, 0.05, 0.10)");
        opts.workers = sub->add_option("--workers", flags.workers, "Worker threads per backtest");
    };

    Options sim_opts, bt_opts, fc_opts, rep_opts, val_opts;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario series as CSV");
    add_common(simulate, sim_opts);
    sim_opts.scenario = simulate->add_option("--scenario", flags.scenario, "Scenario preset (1, 2, 3) or JSON file");

    auto* backtest = app.add_subcommand("backtest", "Rolling-window backtest over a (q, m) grid");
    add_common(backtest, bt_opts);
    add_data(backtest, bt_opts);
    add_model(backtest, bt_opts);

    auto* forecast = app.add_subcommand("forecast", "Forecast the next m bars from the trailing q bars");
    add_common(forecast, fc_opts);
    add_data(forecast, fc_opts);
    add_model(forecast, fc_opts);

    auto* report = app.add_subcommand("report", "Tabulate backtest outputs");
    report->add_option("--config", flags.config, "JSON config file (flags override it)");
    rep_opts.input = report->add_option("--input", flags.input, "Directory with backtest JSON outputs");
    rep_opts.out = report->add_option("-o,--out", flags.out, "Directory for report files");

    auto* validate = app.add_subcommand("validate", "Check every bar of a CSV against the OHLC constraints");
    validate->group("");
    val_opts.input = validate->add_option("--input", flags.input, "OHLC CSV file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(resolve(flags, sim_opts), out);
        }
        if (backtest->parsed()) {
            return cmd_backtest(resolve(flags, bt_opts), out);
        }
        if (forecast->parsed()) {
            return cmd_forecast(resolve(flags, fc_opts), out);
        }
        if (report->parsed()) {
            return cmd_report(resolve(flags, rep_opts), out);
        }
        if (validate->parsed()) {
            return cmd_validate(resolve(flags, val_opts), out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace candlecast::cli
