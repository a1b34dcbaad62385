// mpcap: command-line front end.
//
//   mpcap classify --config profile.json
//   mpcap bound    --config point.json
//   mpcap sweep    --config sweep.json [--out table.csv] [--no-oracle]
//   mpcap mi       --config oracle.json
//   mpcap simulate --config channel.json --out samples.csv
//
// Exit status: 0 success, 1 usage / malformed input, 2 numeric or domain error.

#include "mpcap/mpcap.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

namespace {

struct common_options {
    std::string config_path;
    std::string inline_json;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool bits = false;
    bool no_oracle = false;
};

mpcap::json load_document(const common_options& o)
{
    if (!o.inline_json.empty()) {
        try {
            return mpcap::json::parse(o.inline_json);
        } catch (const mpcap::json::parse_error& e) {
            throw mpcap::parse_error(std::string("--json: ") + e.what());
        }
    }
    if (o.config_path.empty())
        throw mpcap::parse_error("either --config <path> or --json '<document>' is required");
    return mpcap::load_json_file(o.config_path);
}

// --bits only rescales what is printed; files stay in nats.
double display(double nats, const common_options& o) { return o.bits ? nats / std::numbers::ln2 : nats; }

void emit(const mpcap::json& doc, const common_options& o)
{
    if (o.out_path.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out)
        throw mpcap::parse_error("cannot write '" + o.out_path + "'");
    out << doc.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw mpcap::parse_error("cannot write '" + path + "'");
    return out;
}

int run_classify(const common_options& o)
{
    const auto doc = load_document(o);
    const auto& profile_doc = doc.contains("profile") ? doc.at("profile") : doc;
    const auto profile = mpcap::parse_profile(profile_doc);
    const auto range = doc.value("inspect_range", mpcap::default_inspect_range);
    auto report = mpcap::report_to_json(mpcap::classify(profile, range));
    report["profile"] = mpcap::profile_to_json(profile);
    emit(report, o);
    return 0;
}

int run_bound(const common_options& o)
{
    const auto doc = load_document(o);
    mpcap::json sweep_doc = doc;
    const auto snr = mpcap::linear_quantity(doc, "snr");
    if (!snr)
        throw mpcap::parse_error("bound: missing 'snr' (or 'snr_db')");
    sweep_doc["snr_grid"] = mpcap::json::array({*snr});
    sweep_doc.erase("snr");
    sweep_doc.erase("snr_db");
    auto config = mpcap::parse_sweep_config(sweep_doc);
    config.oracle = config.oracle && !o.no_oracle;
    if (o.seed)
        config.seed = *o.seed;
    config.threads = 1;
    const auto result = mpcap::run_sweep(config);
    const auto& row = result.rows.front();
    if (!row.error.empty()) {
        std::cerr << "mpcap bound: " << row.error << '\n';
        return 2;
    }

    auto out = mpcap::sweep_to_json(result).front();
    out["units"] = o.bits ? "bits" : "nats";
    for (const char* key : {"upsilon_nats", "c_lb_raw_nats", "c_lb_nats", "mi_oracle_nats", "mi_stderr",
                            "asymptotic_limit_nats"})
        if (out[key].is_number())
            out[key] = display(out[key].get<double>(), o);
    if (config.rho_majorant) {
        const auto closed = mpcap::guard_length_closed_form(*config.rho_majorant, row.snr);
        out["closed_form_guard_len"] = closed.guard_len;
        out["closed_form_clamped"] = closed.clamped;
    }
    out["profile"] = mpcap::profile_to_json(config.profile);
    emit(out, o);
    return 0;
}

int run_sweep_cmd(const common_options& o)
{
    auto config = mpcap::parse_sweep_config(load_document(o));
    if (o.no_oracle)
        config.oracle = false;
    if (o.seed)
        config.seed = *o.seed;
    if (!o.out_path.empty())
        config.csv_path = o.out_path;

    const auto result = mpcap::run_sweep(config);
    if (config.csv_path.empty()) {
        mpcap::write_csv(std::cout, result);
    } else {
        auto out = open_output(config.csv_path);
        mpcap::write_csv(out, result);
    }
    if (!config.svg_path.empty()) {
        auto out = open_output(config.svg_path);
        mpcap::write_svg(out, result);
    }

    int failures = 0;
    for (const auto& row : result.rows) {
        if (!row.error.empty()) {
            ++failures;
            continue;
        }
        if (!config.csv_path.empty())
            std::cerr << "snr " << mpcap::format_real(row.snr) << "  L=" << *row.guard_len << "  tau=" << *row.tau
                      << "  c_lb_raw=" << display(*row.c_lb_raw, o) << (o.bits ? " bits" : " nats") << '\n';
    }
    if (failures > 0)
        std::cerr << failures << " grid point(s) reported errors; see the error column\n";
    return 0;
}

int run_mi(const common_options& o)
{
    const auto doc = load_document(o);
    if (!doc.contains("law"))
        throw mpcap::parse_error("mi: missing 'law'");
    const auto law = mpcap::parse_input_law(doc.at("law"));
    mpcap::mi_options opts;
    if (doc.contains("n_samples"))
        opts.n_samples = static_cast<std::uint64_t>(doc.at("n_samples").get<double>());
    opts.seed = o.seed.value_or(doc.value("seed", std::uint64_t{0}));
    opts.partitions = doc.value("partitions", std::size_t{8});
    const double alpha_h = mpcap::linear_quantity(doc, "alpha_h").value_or(1.0);
    const auto sigma_w_sq = mpcap::linear_quantity(doc, "sigma_w_sq");
    if (!sigma_w_sq)
        throw mpcap::parse_error("mi: missing 'sigma_w_sq'");

    const auto est = mpcap::estimate_mi(law, alpha_h, *sigma_w_sq, opts);
    mpcap::json out = {{"units", o.bits ? "bits" : "nats"},
                       {"value", display(est.value, o)},
                       {"std_err", display(est.std_err, o)},
                       {"n_samples", est.n_samples},
                       {"h_output", display(est.h_output, o)},
                       {"h_conditional", display(est.h_conditional, o)},
                       {"quadrature_nodes", est.quadrature_nodes}};
    if (const auto* slot = std::get_if<mpcap::log_uniform_slot>(&law)) {
        const double bound =
            mpcap::scheme_slot_bound(alpha_h, mpcap::e_log_h_sq_gaussian(alpha_h), slot->power, slot->tau, *sigma_w_sq);
        out["slot_bound"] = display(bound, o);
    }
    emit(out, o);
    return 0;
}

// Channel input: {"kind": "zeros"} | {"kind": "constant", "re": 1, "im": 0} |
// {"kind": "scheme", "power": P, "guard_len": L, "tau": t}
int run_simulate(const common_options& o)
{
    const auto doc = load_document(o);
    if (!doc.contains("profile"))
        throw mpcap::parse_error("simulate: missing 'profile'");
    mpcap::channel_config config;
    config.profile = mpcap::parse_profile(doc.at("profile"));
    config.sigma_sq = mpcap::linear_quantity(doc, "sigma_sq").value_or(1.0);
    config.seed = o.seed.value_or(doc.value("seed", std::uint64_t{0}));
    const auto n = doc.value("n", std::size_t{1000});
    if (n == 0)
        throw mpcap::parse_error("simulate: n must be positive");

    const auto input_doc = doc.value("input", mpcap::json{{"kind", "zeros"}});
    const auto kind = input_doc.value("kind", std::string("zeros"));
    std::vector<std::complex<double>> inputs(n);
    double peak_power = 1.0;
    if (kind == "constant") {
        const std::complex<double> x{input_doc.value("re", 1.0), input_doc.value("im", 0.0)};
        std::fill(inputs.begin(), inputs.end(), x);
        peak_power = std::max(1.0, std::norm(x));
    } else if (kind == "scheme") {
        mpcap::signaling_scheme scheme;
        scheme.power = mpcap::linear_quantity(input_doc, "power").value_or(2.0);
        scheme.guard_len = input_doc.value("guard_len", mpcap::path_index{0});
        scheme.data_len = input_doc.value("tau", std::size_t{1});
        mpcap::rng gen(mpcap::derive_seed(config.seed, 0x5167));
        const auto blocks = (n + scheme.block_len() - 1) / scheme.block_len();
        inputs = mpcap::sample_blocks(scheme, blocks, gen);
        inputs.resize(n);
        peak_power = scheme.power;
    } else if (kind != "zeros") {
        throw mpcap::parse_error("simulate: input kind must be zeros, constant or scheme");
    }

    config.truncation_depth =
        doc.value("truncation_depth",
                  mpcap::default_truncation_depth(config.profile, peak_power, config.sigma_sq));
    const auto result = mpcap::simulate(config, inputs);
    if (result.truncation_too_shallow)
        std::cerr << "warning: truncation depth " << config.truncation_depth
                  << " neglects interference of " << result.neglected_interference << " (> 1% of sigma^2)\n";

    auto write = [&](std::ostream& out) {
        out << "k,x_re,x_im,y_re,y_im\n";
        for (std::size_t k = 0; k < n; ++k)
            out << k + 1 << ',' << mpcap::format_real(inputs[k].real()) << ',' << mpcap::format_real(inputs[k].imag())
                << ',' << mpcap::format_real(result.outputs[k].real()) << ','
                << mpcap::format_real(result.outputs[k].imag()) << '\n';
    };
    if (o.out_path.empty()) {
        write(std::cout);
    } else {
        auto out = open_output(o.out_path);
        write(out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Capacity lower bounds for noncoherent multipath fading channels"};
    app.require_subcommand(1);
    common_options opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON document describing the run");
        sub->add_option("--json", opts.inline_json, "Inline JSON document instead of --config");
        sub->add_option("--out", opts.out_path, "Output file (default: stdout)");
        sub->add_option("--seed", opts.seed, "Override the RNG seed");
        sub->add_flag("--bits", opts.bits, "Print information quantities in bits instead of nats");
        sub->add_flag("--no-oracle", opts.no_oracle, "Skip the Monte-Carlo mutual-information oracle");
    };

    auto* classify = app.add_subcommand("classify", "Bounded/unbounded verdict for a decay profile");
    auto* bound = app.add_subcommand("bound", "Capacity lower bound at a single SNR");
    auto* sweep = app.add_subcommand("sweep", "Lower bound (and oracle) over an SNR grid, as CSV");
    auto* mi = app.add_subcommand("mi", "Single mutual-information oracle run");
    auto* simulate = app.add_subcommand("simulate", "Dump channel output samples");
    for (auto* sub : {classify, bound, sweep, mi, simulate})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*classify)
            return run_classify(opts);
        if (*bound)
            return run_bound(opts);
        if (*sweep)
            return run_sweep_cmd(opts);
        if (*mi)
            return run_mi(opts);
        if (*simulate)
            return run_simulate(opts);
    } catch (const mpcap::parse_error& e) {
        std::cerr << "mpcap: " << e.what() << '\n';
        return 1;
    } catch (const mpcap::json::exception& e) {
        std::cerr << "mpcap: " << e.what() << '\n';
        return 1;
    } catch (const mpcap::error& e) {
        std::cerr << "mpcap: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
