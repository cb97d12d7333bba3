#include "capkit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "capkit/errors.hpp"

namespace capkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, long line) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw InputError("malformed number '" + s + "'", line);
    return v;
}

long parse_long(const std::string& s, long line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("malformed integer '" + s + "'", line);
    return v;
}

struct Accum {
    SpecificationLimits spec;
    bool spec_set = false;
    std::vector<std::pair<long, double>> rows;  // (idx, value)
};

std::vector<DimensionData> finish(std::map<std::string, Accum>& acc, const std::string& origin) {
    if (acc.empty()) throw InputError("no records in " + origin);
    std::vector<DimensionData> out;
    out.reserve(acc.size());
    for (auto& [id, a] : acc) {  // std::map iterates in id order
        std::sort(a.rows.begin(), a.rows.end());
        DimensionData d;
        d.spec = a.spec;
        d.batch.dimension_id = id;
        d.batch.values.reserve(a.rows.size());
        long expect = 1;
        for (const auto& [idx, v] : a.rows) {
            if (idx != expect)
                throw InputError("dimension " + id + ": observation indices not contiguous (" +
                                 std::to_string(idx) + " after " + std::to_string(expect - 1) + ")");
            ++expect;
            d.batch.values.push_back(v);
        }
        d.batch.validate();
        d.spec.validate();
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

std::vector<DimensionData> ingest(std::istream& in, const std::string& origin) {
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw InputError("no records in " + origin);
    ++lineno;
    if (trim(line) != kLongCsvHeader)
        throw InputError("expected header '" + std::string(kLongCsvHeader) + "'", lineno);

    std::map<std::string, Accum> acc;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 6) throw InputError("expected 6 fields", lineno);
        const std::string& id = cells[0];
        if (id.empty()) throw InputError("empty dimension id", lineno);
        SpecificationLimits spec;
        spec.nominal = parse_double(cells[1], lineno);
        spec.tol_plus = parse_double(cells[2], lineno);
        spec.tol_minus = parse_double(cells[3], lineno);
        const long idx = parse_long(cells[4], lineno);
        const double value = parse_double(cells[5], lineno);
        if (!std::isfinite(value)) throw InputError("non-finite value", lineno);

        Accum& a = acc[id];
        if (!a.spec_set) {
            a.spec = spec;
            a.spec_set = true;
        } else if (a.spec.nominal != spec.nominal || a.spec.tol_plus != spec.tol_plus ||
                   a.spec.tol_minus != spec.tol_minus) {
            throw InputError("dimension " + id + ": inconsistent specification", lineno);
        }
        a.rows.emplace_back(idx, value);
    }
    return finish(acc, origin);
}

std::vector<DimensionData> ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return ingest(in, path);
}

std::vector<DimensionData> read_wide(std::istream& in, const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        rows.push_back(split_csv(line));
    }
    if (rows.size() < 5) throw InputError("wide table needs header, T, Tol+, Tol- and data rows in " + origin);

    const auto& header = rows[0];
    if (header.size() < 2) throw InputError("wide table has no dimension columns", 1);
    const std::size_t ndim = header.size() - 1;

    const auto label_row = [&](std::size_t r, const std::string& want) -> const std::vector<std::string>& {
        if (rows[r].empty() || rows[r][0] != want)
            throw InputError("expected row label '" + want + "', got '" +
                             (rows[r].empty() ? "" : rows[r][0]) + "'", static_cast<long>(r + 1));
        if (rows[r].size() != ndim + 1)
            throw InputError("row '" + want + "' has wrong width", static_cast<long>(r + 1));
        return rows[r];
    };
    const auto& trow = label_row(1, "T");
    const auto& tprow = label_row(2, "Tol+");
    const auto& tmrow = label_row(3, "Tol-");

    std::map<std::string, Accum> acc;
    std::vector<std::string> ids(ndim);
    for (std::size_t j = 0; j < ndim; ++j) {
        ids[j] = header[j + 1];
        if (ids[j].empty()) throw InputError("empty dimension id in header", 1);
        Accum& a = acc[ids[j]];
        a.spec.nominal = parse_double(trow[j + 1], 2);
        a.spec.tol_plus = parse_double(tprow[j + 1], 3);
        a.spec.tol_minus = parse_double(tmrow[j + 1], 4);
        a.spec_set = true;
    }
    for (std::size_t r = 4; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != ndim + 1)
            throw InputError("data row has wrong width", static_cast<long>(r + 1));
        const long idx = parse_long(row[0], static_cast<long>(r + 1));
        for (std::size_t j = 0; j < ndim; ++j)
            acc[ids[j]].rows.emplace_back(idx, parse_double(row[j + 1], static_cast<long>(r + 1)));
    }
    return finish(acc, origin);
}

std::vector<DimensionData> read_wide(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_wide(in, path);
}

void write_long_csv(const std::vector<DimensionData>& data, std::ostream& out) {
    out << kLongCsvHeader << "\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& d : data)
        for (std::size_t i = 0; i < d.batch.values.size(); ++i)
            out << d.batch.dimension_id << ',' << num(d.spec.nominal) << ',' << num(d.spec.tol_plus)
                << ',' << num(d.spec.tol_minus) << ',' << (i + 1) << ','
                << num(d.batch.values[i]) << "\n";
}

void write_long_csv(const std::vector<DimensionData>& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    write_long_csv(data, out);
}

}  // namespace capkit
