#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "capkit/emit.hpp"
#include "capkit/errors.hpp"
#include "capkit/format.hpp"
#include "capkit/report.hpp"
#include "fixture.hpp"

using namespace capkit;

namespace {

const SeedSpec kSeed{20240001, 0};

DecisionPolicy policy() {
    DecisionPolicy p;
    p.rule = ApprovalRule::LcbBootstrap;
    return p;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

TEST_CASE("ingest validates shape and content") {
    CHECK(testdata::fixture().size() == 18);

    std::istringstream empty("");
    CHECK_THROWS_AS((void)ingest(empty, "empty"), InputError);

    std::istringstream header_only("dim,nominal,tol_plus,tol_minus,idx,value\n");
    CHECK_THROWS_AS((void)ingest(header_only, "header"), InputError);

    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS((void)ingest(bad_header, "bad"), InputError);

    std::istringstream five_rows(
        "dim,nominal,tol_plus,tol_minus,idx,value\n"
        "A,1.0,0.1,0.1,1,1.01\nA,1.0,0.1,0.1,2,0.99\nA,1.0,0.1,0.1,3,1.02\n"
        "A,1.0,0.1,0.1,4,0.98\nA,1.0,0.1,0.1,5,1.00\n");
    const auto small = ingest(five_rows, "five");
    CHECK(small.size() == 1);
    CHECK(small[0].batch.n() == 5);
    CHECK_THROWS_AS((void)select_model(small[0].batch), DomainError);  // fit refuses n < 8

    std::istringstream malformed(
        "dim,nominal,tol_plus,tol_minus,idx,value\n"
        "A,1.0,0.1,0.1,1,1.01\n"
        "A,1.0,0.1,0.1,2,oops\n");
    try {
        (void)ingest(malformed, "m");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line == 3);
    }

    std::istringstream inconsistent(
        "dim,nominal,tol_plus,tol_minus,idx,value\n"
        "A,1.0,0.1,0.1,1,1.01\n"
        "A,1.5,0.1,0.1,2,0.99\n");
    try {
        (void)ingest(inconsistent, "i");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("A") != std::string::npos);
    }

    std::istringstream gap(
        "dim,nominal,tol_plus,tol_minus,idx,value\n"
        "A,1.0,0.1,0.1,1,1.01\n"
        "A,1.0,0.1,0.1,3,0.99\n");
    CHECK_THROWS_AS((void)ingest(gap, "gap"), InputError);
}

TEST_CASE("wide layout converts to the bundled long fixture") {
    const auto wide = read_wide(std::string(CAPKIT_DATA_DIR) + "/dimensions_wide.csv");
    const auto& longf = testdata::fixture();
    REQUIRE(wide.size() == longf.size());
    for (std::size_t i = 0; i < wide.size(); ++i) {
        CHECK(wide[i].batch.dimension_id == longf[i].batch.dimension_id);
        CHECK(wide[i].spec.nominal == longf[i].spec.nominal);
        CHECK(wide[i].spec.tol_plus == longf[i].spec.tol_plus);
        REQUIRE(wide[i].batch.values.size() == longf[i].batch.values.size());
        for (std::size_t j = 0; j < wide[i].batch.values.size(); ++j)
            CHECK(wide[i].batch.values[j] == longf[i].batch.values[j]);
    }

    // long-form writer round trip
    std::stringstream out;
    write_long_csv(wide, out);
    const auto again = ingest(out, "roundtrip");
    REQUIRE(again.size() == wide.size());
    for (std::size_t i = 0; i < wide.size(); ++i)
        for (std::size_t j = 0; j < wide[i].batch.values.size(); ++j)
            CHECK(again[i].batch.values[j] == wide[i].batch.values[j]);
}

TEST_CASE("analyze_dataset reproduces the D090 row and isolates failures") {
    auto data = testdata::fixture();
    // inject a poison dimension: constant values defeat every fit
    DimensionData bad;
    bad.batch.dimension_id = "BAD";
    bad.batch.values = std::vector<double>(32, 1.0);
    bad.spec = SpecificationLimits{1.0, 0.1, 0.1};
    data.push_back(bad);

    const auto analysis = analyze_dataset(data, policy(), 2000, kSeed);
    REQUIRE(analysis.reports.size() == 19);

    const auto* d090 = &analysis.reports[0];
    for (const auto& r : analysis.reports)
        if (r.dimension_id == "D090") d090 = &r;
    REQUIRE(d090->ok());
    CHECK(d090->summary.mean == doctest::Approx(1.646).epsilon(5e-4));
    CHECK(d090->cpk_normal == doctest::Approx(1.334).epsilon(0.005 / 1.334));
    CHECK(d090->selected_family == Family::Normal);
    CHECK(d090->delta_cpk == 0.0);
    CHECK(d090->ppm_normal.base.ppm() == doctest::Approx(33.1).epsilon(0.02));
    CHECK(d090->reliability.p_hat == doctest::Approx(0.575).epsilon(0.05 / 0.575));

    // distortion is zero exactly for Normal-selected rows, nonzero otherwise
    for (const auto& r : analysis.reports) {
        if (!r.ok()) continue;
        if (r.selected_family == Family::Normal)
            CHECK(r.delta_cpk == 0.0);
        else
            CHECK(r.delta_cpk != 0.0);
    }

    const auto* badr = &analysis.reports[0];
    for (const auto& r : analysis.reports)
        if (r.dimension_id == "BAD") badr = &r;
    CHECK_FALSE(badr->ok());
    CHECK(!badr->error.empty());
}

TEST_CASE("analysis is deterministic end to end") {
    const auto& data = testdata::fixture();
    const auto a = analyze_dataset(data, policy(), 500, kSeed);
    const auto b = analyze_dataset(data, policy(), 500, kSeed);
    std::stringstream sa, sb;
    emit_report_json(a, sa);
    emit_report_json(b, sb);
    CHECK(sa.str() == sb.str());
    std::stringstream ca, cb;
    emit_report_csv(a, ca);
    emit_report_csv(b, cb);
    CHECK(ca.str() == cb.str());
}

TEST_CASE("per-dimension streams do not depend on dataset composition") {
    const auto& d090 = testdata::dim("D090");
    const auto solo = analyze_dataset({d090}, policy(), 500, kSeed);
    const auto full = analyze_dataset(testdata::fixture(), policy(), 500, kSeed);
    const auto* in_full = &full.reports[0];
    for (const auto& r : full.reports)
        if (r.dimension_id == "D090") in_full = &r;
    CHECK(solo.reports[0].reliability.p_hat == in_full->reliability.p_hat);
    CHECK(solo.reports[0].reliability.lcb == in_full->reliability.lcb);
}

TEST_CASE("json -> csv -> json numeric payload round trip") {
    const auto analysis = analyze_dataset(testdata::fixture(), policy(), 200, kSeed);

    std::stringstream cs;
    emit_report_csv(analysis, cs);
    std::string line;
    std::getline(cs, line);
    const auto header = split_line(line);
    const auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        FAIL("missing column ", name);
        return std::size_t{0};
    };

    std::stringstream js;
    emit_report_json(analysis, js);
    const auto root = nlohmann::json::parse(js.str());

    // conventions sidecar names every computation choice
    const auto& conv = root["provenance"]["conventions"];
    CHECK(root["provenance"]["rng"] == "philox4x64-10");
    for (const char* key : {"moments", "normality_test", "bootstrap_quantile", "fitted_cpk",
                            "mle_sigma_divisor", "perturbation"})
        CHECK(conv.contains(key));
    CHECK(root["provenance"]["root_seed"].get<std::uint64_t>() == kSeed.root_seed);

    const std::vector<std::pair<std::string, std::string>> direct = {
        {"xbar_raw", "xbar"},       {"S_raw", "S"},
        {"skew_raw", "skew"},       {"kurt_raw", "kurt"},
        {"p_value_raw", "p_value"}, {"cpk_fitted_raw", "cpk_fitted"},
        {"cpk_normal_raw", "cpk_normal"}, {"delta_cpk_raw", "delta_cpk"},
        {"p_hat_raw", "p_hat"},     {"lcb_raw", "lcb"}};

    int rows = 0;
    while (std::getline(cs, line)) {
        const auto cells = split_line(line);
        const auto& dim = root["dimensions"][cells[col("dim")]];
        for (const auto& [ccol, jkey] : direct) {
            const double c = std::stod(cells[col(ccol)]);
            const double j = dim["values"][jkey].get<double>();
            CHECK(c == j);  // format_full is exact
        }
        CHECK(std::stod(cells[col("log10_ppm0_normal")]) ==
              dim["values"]["ppm_normal"]["base"]["log10_ppm"].get<double>());
        CHECK(std::stod(cells[col("log10_ppm_plus_fitted")]) ==
              dim["values"]["ppm_fitted"]["plus"]["log10_ppm"].get<double>());
        ++rows;
    }
    CHECK(rows == 18);
}

TEST_CASE("empty report emits a bare header") {
    DatasetAnalysis empty;
    std::stringstream out;
    emit_report_csv(empty, out);
    std::string line;
    CHECK(std::getline(out, line));
    CHECK(line.find("dim,") == 0);
    CHECK_FALSE(std::getline(out, line));
}

TEST_CASE("svg pass-curve rendering") {
    std::vector<PassCurve> curves;
    for (double cpk : {1.00, 1.33, 1.67})
        curves.push_back(pass_curve(cpk, 1.33, {5, 10, 20, 40}, 200, kSeed));
    std::stringstream svg;
    emit_curves_svg(curves, 0.95, svg);
    const std::string s = svg.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("stroke-dasharray") != std::string::npos);  // gamma line
    CHECK(s.find("gamma = 0.95") != std::string::npos);
    CHECK(s.find("p_acc") != std::string::npos);
    CHECK(s.find("cpk_true = 1.33") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') > 10);
    // three polylines, one per curve
    std::size_t count = 0, pos = 0;
    while ((pos = s.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 9;
    }
    CHECK(count == 3);
}

TEST_CASE("display formatting follows the table convention") {
    CHECK(format_display(33.0726) == "33.1");
    CHECK(format_display(210.6) == "211");
    CHECK(format_display(2.3201) == "2.32");
    CHECK(format_display(0.5752) == "0.575");
    CHECK(format_display(100234.0) == "1.00e+05");
    CHECK(format_display(0.0099) == "9.90e-03");
    CHECK(format_display(0.0108) == "0.0108");
    CHECK(format_display(-0.261) == "-0.261");
    CHECK(format_display(0.0) == "0");
    CHECK(format_display_log10(std::log10(5.38e-19)) == "5.38e-19");
    CHECK(format_display_log10(-57.0342159) == "9.24e-58");  // log10 of 9.24e-58
    CHECK(format_display_log10(2.0) == "100");
    // full-precision strings parse back bit-exactly
    for (double v : {1.0 / 3.0, 5.38e-19, 0.127, 33.0726, 1e-300}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}
