#include "capkit/emit.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "capkit/errors.hpp"
#include "capkit/format.hpp"

namespace capkit {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

json tail_json(const TailRisk& t) {
    json j;
    j["log10_ppm"] = t.log10_ppm();
    if (std::isfinite(t.ppm()) && !t.underflowed()) j["ppm"] = t.ppm();
    if (t.underflowed()) j["underflowed_linear"] = true;
    return j;
}

json triplet_json(const PpmTriplet& t) {
    return json{{"cv", t.cv},
                {"base", tail_json(t.base.total)},
                {"plus", tail_json(t.plus.total)},
                {"minus", tail_json(t.minus.total)},
                {"base_lower", tail_json(t.base.lower)},
                {"base_upper", tail_json(t.base.upper)}};
}

const char* kReportHeader =
    "dim,T,tol_plus,tol_minus,xbar,S,skew,kurt,p_value,dist,"
    "cpk_fitted,cpk_normal,delta_cpk,p_hat,lcb,"
    "ppm0_fitted,ppm_plus_fitted,ppm_minus_fitted,"
    "ppm0_normal,ppm_plus_normal,ppm_minus_normal,"
    "n,cv_s_raw,xbar_raw,S_raw,skew_raw,kurt_raw,ad_stat_raw,p_value_raw,"
    "cpk_fitted_raw,cpk_normal_raw,delta_cpk_raw,p_hat_raw,lcb_raw,lcb_analytic_raw,"
    "log10_ppm0_fitted,log10_ppm_plus_fitted,log10_ppm_minus_fitted,"
    "log10_ppm0_normal,log10_ppm_plus_normal,log10_ppm_minus_normal,"
    "degenerate_resamples,decision,error";

}  // namespace

void emit_report_csv(const DatasetAnalysis& analysis, std::ostream& out) {
    out << kReportHeader << "\n";
    for (const DimensionReport& r : analysis.reports) {
        out << r.dimension_id << ',' << format_full(r.spec.nominal) << ','
            << format_full(r.spec.tol_plus) << ',' << format_full(r.spec.tol_minus) << ',';
        if (!r.ok()) {
            for (int i = 0; i < 39; ++i) out << ',';
            out << '"' << r.error << "\"\n";
            continue;
        }
        out << format_display(r.summary.mean) << ',' << format_display(r.summary.sd) << ','
            << format_display(r.summary.skewness) << ',' << format_display(r.summary.excess_kurtosis)
            << ',' << format_display(r.normality.p_value) << ',' << family_name(r.selected_family)
            << ',' << format_display(r.cpk_fitted) << ',' << format_display(r.cpk_normal) << ','
            << format_display(r.delta_cpk) << ',' << format_display(r.reliability.p_hat) << ','
            << format_display(r.reliability.lcb) << ','
            << format_display_log10(r.ppm_fitted.base.total.log10_ppm()) << ','
            << format_display_log10(r.ppm_fitted.plus.total.log10_ppm()) << ','
            << format_display_log10(r.ppm_fitted.minus.total.log10_ppm()) << ','
            << format_display_log10(r.ppm_normal.base.total.log10_ppm()) << ','
            << format_display_log10(r.ppm_normal.plus.total.log10_ppm()) << ','
            << format_display_log10(r.ppm_normal.minus.total.log10_ppm()) << ',' << r.summary.n
            << ',' << format_full(r.summary.cv_s) << ',' << format_full(r.summary.mean) << ','
            << format_full(r.summary.sd) << ',' << format_full(r.summary.skewness) << ','
            << format_full(r.summary.excess_kurtosis) << ',' << format_full(r.normality.statistic)
            << ',' << format_full(r.normality.p_value) << ',' << format_full(r.cpk_fitted) << ','
            << format_full(r.cpk_normal) << ',' << format_full(r.delta_cpk) << ','
            << format_full(r.reliability.p_hat) << ',' << format_full(r.reliability.lcb) << ','
            << format_full(r.lcb_analytic_value) << ','
            << format_full(r.ppm_fitted.base.total.log10_ppm()) << ','
            << format_full(r.ppm_fitted.plus.total.log10_ppm()) << ','
            << format_full(r.ppm_fitted.minus.total.log10_ppm()) << ','
            << format_full(r.ppm_normal.base.total.log10_ppm()) << ','
            << format_full(r.ppm_normal.plus.total.log10_ppm()) << ','
            << format_full(r.ppm_normal.minus.total.log10_ppm()) << ','
            << r.reliability.degenerate_resamples << ','
            << (r.reliability.decision == Decision::Accept ? "accept" : "reject") << ",\n";
    }
}

void emit_report_json(const DatasetAnalysis& analysis, std::ostream& out) {
    json root;
    const AnalysisProvenance& p = analysis.provenance;
    root["provenance"] = {
        {"rng", p.rng_algorithm},
        {"root_seed", p.seed.root_seed},
        {"stream_id", p.seed.stream_id},
        {"B", p.b_resamples},
        {"c0", p.policy.c0},
        {"gamma", p.policy.gamma},
        {"rule", rule_name(p.policy.rule)},
        {"conventions",
         {{"moments", p.moment_convention},
          {"normality_test", p.normality_test},
          {"bootstrap_quantile", p.bootstrap_quantile},
          {"fitted_cpk", p.fitted_cpk_method},
          {"mle_sigma_divisor", p.mle_sigma_divisor},
          {"perturbation", p.perturbation}}}};

    json dims = json::object();
    for (const DimensionReport& r : analysis.reports) {
        json d;
        d["spec"] = {{"nominal", r.spec.nominal},
                     {"tol_plus", r.spec.tol_plus},
                     {"tol_minus", r.spec.tol_minus},
                     {"lsl", r.spec.lsl()},
                     {"usl", r.spec.usl()}};
        if (!r.ok()) {
            d["error"] = r.error;
            dims[r.dimension_id] = d;
            continue;
        }
        d["values"] = {
            {"n", r.summary.n},
            {"xbar", r.summary.mean},
            {"S", r.summary.sd},
            {"skew", r.summary.skewness},
            {"kurt", r.summary.excess_kurtosis},
            {"cv_s", r.summary.cv_s},
            {"ad_statistic", r.normality.statistic},
            {"p_value", r.normality.p_value},
            {"normality_rejected", r.normality.rejected_at_0_05},
            {"dist", family_name(r.selected_family)},
            {"model_location", r.likelihood_model.location},
            {"model_scale", r.likelihood_model.scale},
            {"loglik", r.likelihood_model.loglik},
            {"aicc", r.likelihood_model.aicc},
            {"cpk_fitted", r.cpk_fitted},
            {"cpk_normal", r.cpk_normal},
            {"delta_cpk", r.delta_cpk},
            {"p_hat", r.reliability.p_hat},
            {"accepted", r.reliability.accepted},
            {"lcb", r.reliability.lcb},
            {"lcb_analytic", r.lcb_analytic_value},
            {"degenerate_resamples", r.reliability.degenerate_resamples},
            {"decision", r.reliability.decision == Decision::Accept ? "accept" : "reject"},
            {"ppm_normal", triplet_json(r.ppm_normal)},
            {"ppm_fitted", triplet_json(r.ppm_fitted)}};
        d["display"] = {
            {"xbar", format_display(r.summary.mean)},
            {"S", format_display(r.summary.sd)},
            {"skew", format_display(r.summary.skewness)},
            {"kurt", format_display(r.summary.excess_kurtosis)},
            {"p_value", format_display(r.normality.p_value)},
            {"cpk_fitted", format_display(r.cpk_fitted)},
            {"cpk_normal", format_display(r.cpk_normal)},
            {"delta_cpk", format_display(r.delta_cpk)},
            {"p_hat", format_display(r.reliability.p_hat)},
            {"lcb", format_display(r.reliability.lcb)},
            {"ppm0_normal", format_display_log10(r.ppm_normal.base.total.log10_ppm())},
            {"ppm_plus_normal", format_display_log10(r.ppm_normal.plus.total.log10_ppm())},
            {"ppm_minus_normal", format_display_log10(r.ppm_normal.minus.total.log10_ppm())},
            {"ppm0_fitted", format_display_log10(r.ppm_fitted.base.total.log10_ppm())},
            {"ppm_plus_fitted", format_display_log10(r.ppm_fitted.plus.total.log10_ppm())},
            {"ppm_minus_fitted", format_display_log10(r.ppm_fitted.minus.total.log10_ppm())}};
        dims[r.dimension_id] = d;
    }
    root["dimensions"] = dims;
    out << root.dump(1) << "\n";
}

void emit_curves_csv(const std::vector<PassCurve>& curves, std::ostream& out) {
    out << "cpk_true,c0,R,n,p_acc,mc_std_err\n";
    for (const PassCurve& c : curves)
        for (const PassPoint& p : c.points)
            out << format_full(c.cpk_true) << ',' << format_full(c.c0) << ',' << c.replications
                << ',' << p.n << ',' << format_full(p.p_acc) << ',' << format_full(p.mc_std_err)
                << "\n";
}

void emit_curves_json(const std::vector<PassCurve>& curves, std::ostream& out) {
    json root = json::array();
    for (const PassCurve& c : curves) {
        json jc;
        jc["cpk_true"] = c.cpk_true;
        jc["c0"] = c.c0;
        jc["R"] = c.replications;
        jc["seed"] = {{"root_seed", c.seed.root_seed}, {"stream_id", c.seed.stream_id}};
        jc["points"] = json::array();
        for (const PassPoint& p : c.points)
            jc["points"].push_back({{"n", p.n}, {"p_acc", p.p_acc}, {"mc_std_err", p.mc_std_err}});
        root.push_back(jc);
    }
    out << root.dump(1) << "\n";
}

void emit_curves_svg(const std::vector<PassCurve>& curves, double gamma, std::ostream& out) {
    const double width = 720, height = 480;
    const double ml = 70, mr = 30, mt = 30, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;

    std::size_t n_lo = 0, n_hi = 0;
    for (const PassCurve& c : curves)
        for (const PassPoint& p : c.points) {
            n_lo = n_lo == 0 ? p.n : std::min(n_lo, p.n);
            n_hi = std::max(n_hi, p.n);
        }
    if (n_lo == 0) {
        n_lo = 2;
        n_hi = 10;
    }
    if (n_hi <= n_lo) n_hi = n_lo + 1;
    const double lx0 = std::log10(static_cast<double>(n_lo));
    const double lx1 = std::log10(static_cast<double>(n_hi));
    const auto X = [&](double n) { return ml + (std::log10(n) - lx0) / (lx1 - lx0) * pw; };
    const auto Y = [&](double p) { return mt + (1.0 - p) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes and y ticks
    out << "<g stroke=\"black\" fill=\"none\"><path d=\"M" << ml << " " << mt << " V" << mt + ph
        << " H" << ml + pw << "\"/></g>\n";
    for (int i = 0; i <= 10; i += 2) {
        const double p = i / 10.0;
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(p) << "\" x2=\"" << ml << "\" y2=\""
            << Y(p) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 10 << "\" y=\"" << Y(p) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << format_display(p) << "</text>\n";
    }
    // x ticks at each distinct grid n of the first curve
    if (!curves.empty())
        for (const PassPoint& p : curves.front().points)
            out << "<line x1=\"" << X(p.n) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(p.n)
                << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
                << "<text x=\"" << X(p.n) << "\" y=\"" << mt + ph + 20
                << "\" text-anchor=\"middle\" font-size=\"12\">" << p.n << "</text>\n";

    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">n</text>\n"
        << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">p_acc</text>\n";

    // reliability target
    out << "<line x1=\"" << ml << "\" y1=\"" << Y(gamma) << "\" x2=\"" << ml + pw << "\" y2=\""
        << Y(gamma) << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n"
        << "<text x=\"" << ml + pw - 4 << "\" y=\"" << Y(gamma) - 6
        << "\" text-anchor=\"end\" font-size=\"12\">gamma = " << format_display(gamma)
        << "</text>\n";

    int ci = 0;
    for (const PassCurve& c : curves) {
        const char* color = palette[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const PassPoint& p : c.points) out << X(p.n) << "," << Y(p.p_acc) << " ";
        out << "\"/>\n";
        for (const PassPoint& p : c.points)
            out << "<circle cx=\"" << X(p.n) << "\" cy=\"" << Y(p.p_acc)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const std::string label = std::isnan(c.cpk_true)
                                      ? std::string("bootstrap")
                                      : "cpk_true = " + format_display(c.cpk_true);
        out << "<text x=\"" << ml + 12 << "\" y=\"" << mt + 18 + 18 * ci << "\" fill=\"" << color
            << "\" font-size=\"13\">" << label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

void emit_report_csv(const DatasetAnalysis& a, const std::string& path) {
    auto f = open_out(path);
    emit_report_csv(a, f);
}
void emit_report_json(const DatasetAnalysis& a, const std::string& path) {
    auto f = open_out(path);
    emit_report_json(a, f);
}
void emit_curves_csv(const std::vector<PassCurve>& c, const std::string& path) {
    auto f = open_out(path);
    emit_curves_csv(c, f);
}
void emit_curves_json(const std::vector<PassCurve>& c, const std::string& path) {
    auto f = open_out(path);
    emit_curves_json(c, f);
}
void emit_curves_svg(const std::vector<PassCurve>& c, double gamma, const std::string& path) {
    auto f = open_out(path);
    emit_curves_svg(c, gamma, f);
}

}  // namespace capkit
