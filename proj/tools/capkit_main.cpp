// capkit command line: capability analysis, reliability bootstrap, pass
// curves, sample-size search, amplification profiles, format conversion.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capkit/amplification.hpp"
#include "capkit/dataset.hpp"
#include "capkit/emit.hpp"
#include "capkit/errors.hpp"
#include "capkit/format.hpp"
#include "capkit/report.hpp"
#include "capkit/samplesize.hpp"

namespace {

using namespace capkit;

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw InputError("cannot write '" + path + "'");
    return file;
}

int run(int argc, char** argv) {
    CLI::App app{"process-capability reliability toolkit"};
    app.require_subcommand(1);

    std::string data_path, out_path, format = "csv", dim_id;
    std::uint64_t root_seed = 20240001, stream_id = 0;
    double c0 = 1.33, gamma = 0.95;
    long B = 2000, R = 5000;

    const auto add_common = [&](CLI::App* cmd, bool with_B, bool with_R) {
        cmd->add_option("--c0", c0, "capability threshold")->capture_default_str();
        cmd->add_option("--gamma", gamma, "reliability level in (0,1)")->capture_default_str();
        if (with_B) cmd->add_option("--B", B, "bootstrap resamples")->capture_default_str();
        if (with_R) cmd->add_option("--R", R, "Monte Carlo replications")->capture_default_str();
        cmd->add_option("--seed", root_seed, "root seed")->capture_default_str();
        cmd->add_option("--stream", stream_id, "stream id")->capture_default_str();
        cmd->add_option("--format", format, "csv|json (svg for curves)")->capture_default_str();
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };

    // analyze
    auto* analyze = app.add_subcommand("analyze", "full per-dimension report from a dataset");
    analyze->add_option("--data", data_path, "long-form CSV")->required();
    add_common(analyze, true, false);

    // bootstrap
    auto* boot = app.add_subcommand("bootstrap", "bootstrap reliability of one dimension");
    boot->add_option("--data", data_path, "long-form CSV")->required();
    boot->add_option("--dim", dim_id, "dimension id")->required();
    add_common(boot, true, false);

    // passcurve
    auto* pc = app.add_subcommand("passcurve", "probability-of-pass curves p_acc(n)");
    std::vector<double> cpk_levels{1.0, 1.33, 1.67};
    std::vector<std::size_t> grid{5, 10, 20, 40, 80, 160};
    pc->add_option("--cpk", cpk_levels, "true capability levels")->delimiter(',');
    pc->add_option("--grid", grid, "sample sizes")->delimiter(',');
    add_common(pc, false, true);

    // samplesize
    auto* ssz = app.add_subcommand("samplesize", "minimum n reaching reliability gamma");
    double cpk_true = 1.67;
    std::size_t n_max = 100000;
    ssz->add_option("--cpk", cpk_true, "true capability level")->required();
    ssz->add_option("--nmax", n_max, "search ceiling")->capture_default_str();
    add_common(ssz, false, true);

    // amplify
    auto* amp = app.add_subcommand("amplify", "amplification profile at a capability level");
    double amp_cpk = 0.0, amp_z = 0.0;
    auto* opt_cpk = amp->add_option("--cpk", amp_cpk, "capability level (z = 3 cpk)");
    auto* opt_z = amp->add_option("--z", amp_z, "standardized distance");
    amp->add_option("--format", format, "csv|json")->capture_default_str();
    amp->add_option("--out", out_path, "output path (default stdout)");

    // convert
    auto* conv = app.add_subcommand("convert", "wide (appendix-style) table to long CSV");
    std::string in_path;
    conv->add_option("--in", in_path, "wide CSV")->required();
    conv->add_option("--out", out_path, "long CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);
    const SeedSpec seed{root_seed, stream_id};
    DecisionPolicy policy;
    policy.c0 = c0;
    policy.gamma = gamma;
    policy.rule = ApprovalRule::LcbBootstrap;
    std::ofstream file;

    if (*analyze) {
        const auto data = ingest(data_path);
        const DatasetAnalysis result = analyze_dataset(data, policy, B, seed);
        std::ostream& out = open_or_stdout(file, out_path);
        if (format == "json")
            emit_report_json(result, out);
        else
            emit_report_csv(result, out);
    } else if (*boot) {
        const auto data = ingest(data_path);
        const DimensionData* dim = nullptr;
        for (const auto& d : data)
            if (d.batch.dimension_id == dim_id) dim = &d;
        if (!dim) throw InputError("dimension '" + dim_id + "' not in " + data_path);
        const SeedSpec dim_seed = seed.derived(dimension_stream_id(dim_id));
        const ReliabilitySummary s = bootstrap_reliability(dim->batch, dim->spec, policy, B, dim_seed);
        std::ostream& out = open_or_stdout(file, out_path);
        if (format == "json") {
            out << "{\"dim\":\"" << dim_id << "\",\"point_cpk\":" << format_full(s.point_cpk)
                << ",\"p_hat\":" << format_full(s.p_hat) << ",\"lcb\":" << format_full(s.lcb)
                << ",\"B\":" << s.b_resamples << ",\"degenerate_resamples\":"
                << s.degenerate_resamples << ",\"decision\":\""
                << (s.decision == Decision::Accept ? "accept" : "reject") << "\"}\n";
        } else {
            out << "dim,point_cpk,p_hat,lcb,B,degenerate_resamples,decision\n"
                << dim_id << ',' << format_full(s.point_cpk) << ',' << format_full(s.p_hat) << ','
                << format_full(s.lcb) << ',' << s.b_resamples << ',' << s.degenerate_resamples
                << ',' << (s.decision == Decision::Accept ? "accept" : "reject") << "\n";
        }
    } else if (*pc) {
        std::vector<PassCurve> curves;
        for (double level : cpk_levels) curves.push_back(pass_curve(level, c0, grid, R, seed));
        std::ostream& out = open_or_stdout(file, out_path);
        if (format == "svg")
            emit_curves_svg(curves, gamma, out);
        else if (format == "json")
            emit_curves_json(curves, out);
        else
            emit_curves_csv(curves, out);
    } else if (*ssz) {
        const SampleSizeResult r = n_min_search(cpk_true, c0, gamma, R, n_max, seed);
        std::ostream& out = open_or_stdout(file, out_path);
        if (format == "json") {
            out << "{\"cpk_true\":" << format_full(cpk_true) << ",\"c0\":" << format_full(c0)
                << ",\"gamma\":" << format_full(gamma) << ",\"verdict\":\"" << r.verdict << "\"";
            if (r.attained) out << ",\"n_min\":" << r.n_min;
            out << ",\"trace\":[";
            for (std::size_t i = 0; i < r.trace.size(); ++i)
                out << (i ? "," : "") << "{\"n\":" << r.trace[i].n
                    << ",\"p_acc\":" << format_full(r.trace[i].p_acc) << "}";
            out << "]}\n";
        } else {
            out << "cpk_true,c0,gamma,verdict,n_min\n"
                << format_full(cpk_true) << ',' << format_full(c0) << ',' << format_full(gamma)
                << ',' << '"' << r.verdict << '"' << ','
                << (r.attained ? std::to_string(r.n_min) : "") << "\n";
            out << "trace_n,trace_p_acc,trace_se\n";
            for (const auto& t : r.trace)
                out << t.n << ',' << format_full(t.p_acc) << ',' << format_full(t.mc_std_err) << "\n";
        }
    } else if (*amp) {
        if (!*opt_cpk && !*opt_z) throw DomainError("amplify: give --cpk or --z");
        const double cpk = *opt_z ? amp_z / 3.0 : amp_cpk;
        const AmplificationProfile prof = amplification_normal(cpk);
        std::ostream& out = open_or_stdout(file, out_path);
        if (format == "json")
            out << "{\"cpk\":" << format_full(prof.cpk_equiv) << ",\"z\":" << format_full(prof.z)
                << ",\"mills\":" << format_full(prof.mills)
                << ",\"a_sigma\":" << format_full(prof.a_sigma) << "}\n";
        else
            out << "cpk,z,mills,a_sigma\n"
                << format_full(prof.cpk_equiv) << ',' << format_full(prof.z) << ','
                << format_full(prof.mills) << ',' << format_full(prof.a_sigma) << "\n";
    } else if (*conv) {
        const auto data = read_wide(in_path);
        if (out_path.empty() || out_path == "-")
            write_long_csv(data, std::cout);
        else
            write_long_csv(data, out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
