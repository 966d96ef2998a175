#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "channels.hpp"
#include "complex_matrix.hpp"
#include "nmr.hpp"
#include "quantum.hpp"
#include "states.hpp"

namespace qmetro {

using ordered_json = nlohmann::ordered_json;

// All CSV/JSON floats are printed with 12 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Matrix / state JSON: {"dim_a": int, "dim_b": int, "re": [[...]], "im": [[...]]}
// with row-major real and imaginary parts.
// ---------------------------------------------------------------------------

inline ordered_json matrix_to_json(const ComplexMatrix& m, std::size_t dim_a,
                                   std::size_t dim_b) {
    ordered_json j;
    j["dim_a"] = dim_a;
    j["dim_b"] = dim_b;
    ordered_json re = ordered_json::array();
    ordered_json im = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row_re = ordered_json::array();
        ordered_json row_im = ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) {
            row_re.push_back(m(i, k).real());
            row_im.push_back(m(i, k).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline ordered_json density_to_json(const DensityMatrix& rho) {
    return matrix_to_json(rho.matrix(), rho.dim_a(), rho.dim_b());
}

inline ComplexMatrix matrix_from_json(const ordered_json& j, std::size_t* dim_a = nullptr,
                                      std::size_t* dim_b = nullptr) {
    if (!j.contains("dim_a") || !j.contains("dim_b") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument(
            "matrix JSON must contain dim_a, dim_b, re, im");
    const std::size_t da = j.at("dim_a").get<std::size_t>();
    const std::size_t db = j.at("dim_b").get<std::size_t>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const std::size_t d = da * db;
    if (re.size() != d || im.size() != d)
        throw std::invalid_argument("matrix JSON: row count != dim_a*dim_b");
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (re[i].size() != d || im[i].size() != d)
            throw std::invalid_argument("matrix JSON: column count != dim_a*dim_b");
        for (std::size_t k = 0; k < d; ++k)
            m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
    }
    if (dim_a) *dim_a = da;
    if (dim_b) *dim_b = db;
    return m;
}

inline DensityMatrix density_from_json(const ordered_json& j) {
    std::size_t da = 0, db = 0;
    const ComplexMatrix m = matrix_from_json(j, &da, &db);
    return DensityMatrix(da, db, m);
}

// ---------------------------------------------------------------------------
// Channel JSON: {"dim": d, "kraus": [matrix...], "tag": string}; the Kraus
// list reuses the matrix schema with dim_a = d, dim_b = 1.
// ---------------------------------------------------------------------------

inline ordered_json channel_to_json(const KrausChannel& ch) {
    ordered_json j;
    j["dim"] = ch.dim();
    ordered_json ks = ordered_json::array();
    for (const ComplexMatrix& k : ch.kraus()) ks.push_back(matrix_to_json(k, ch.dim(), 1));
    j["kraus"] = std::move(ks);
    j["tag"] = channel_family_name(ch.family_tag());
    return j;
}

inline KrausChannel channel_from_json(const ordered_json& j) {
    if (!j.contains("dim") || !j.contains("kraus") || !j.contains("tag"))
        throw std::invalid_argument("channel JSON must contain dim, kraus, tag");
    const std::size_t d = j.at("dim").get<std::size_t>();
    std::vector<ComplexMatrix> kraus;
    for (const auto& kj : j.at("kraus")) kraus.push_back(matrix_from_json(kj));
    const std::string tag = j.at("tag").get<std::string>();
    ChannelFamily family = ChannelFamily::Custom;
    if (tag == "completely_decohering") family = ChannelFamily::CompletelyDecohering;
    else if (tag == "random_unitary") family = ChannelFamily::RandomUnitary;
    else if (tag == "isotropic_unitary") family = ChannelFamily::IsotropicUnitary;
    else if (tag == "isotropic_antiunitary") family = ChannelFamily::IsotropicAntiunitary;
    return KrausChannel(d, std::move(kraus), family);
}

// ---------------------------------------------------------------------------
// PrepReport JSON with the fixed key order.
// ---------------------------------------------------------------------------

inline ordered_json prep_report_to_json(const PrepReport& r) {
    ordered_json j;
    j["theta1"] = r.theta1;
    j["theta2"] = r.theta2;
    j["fidelity_mean"] = r.fidelity_mean;
    j["fidelity_min"] = r.fidelity_min;
    j["tangle_mean"] = r.tangle_mean;
    j["tangle_std"] = r.tangle_std;
    j["ip_mean"] = r.ip_mean;
    j["ip_std"] = r.ip_std;
    j["runs"] = r.runs;
    j["relative_bound"] = r.relative_bound;
    j["seed"] = r.seed;
    return j;
}

// ---------------------------------------------------------------------------
// RFC-4180 CSV writer: CRLF line endings, header always present, fields
// quoted only when needed.
// ---------------------------------------------------------------------------

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width != header width");
        rows_.push_back(std::move(row));
    }

    std::string to_string() const {
        std::ostringstream os;
        write_line(os, header_);
        for (const std::vector<std::string>& row : rows_) write_line(os, row);
        return os.str();
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
        out << to_string();
        if (!out) throw std::runtime_error("CsvWriter: write failed for " + path);
    }

private:
    static void write_line(std::ostringstream& os, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << escape(fields[i]);
        }
        os << "\r\n";
    }

    static std::string escape(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += "\"\"";
            else out += c;
        }
        out += '"';
        return out;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Scan CSV: header `index,tangle,ip,lower_ok,upper_ok`.
inline std::string scan_to_csv(const std::vector<ScanRecord>& records) {
    CsvWriter w({"index", "tangle", "ip", "lower_ok", "upper_ok"});
    for (const ScanRecord& r : records)
        w.add_row({std::to_string(r.seed_index), format_double(r.tangle), format_double(r.ip),
                   scan_lower_ok(r) ? "1" : "0", scan_upper_ok(r) ? "1" : "0"});
    return w.to_string();
}

// Curves CSV: header `T,theta1,theta2,ip`; the lower-curve block (all
// sampled T ascending) precedes the upper-curve block.
inline std::string curves_to_csv(std::size_t n_points) {
    if (n_points < 2) throw std::invalid_argument("curves_to_csv: need n_points >= 2");
    CsvWriter w({"T", "theta1", "theta2", "ip"});
    for (CurveKind kind : {CurveKind::Lower, CurveKind::Upper}) {
        for (std::size_t i = 0; i < n_points; ++i) {
            const double T = double(i) / double(n_points - 1);
            const FamilyParams p = extremal_curve(kind, T);
            w.add_row({format_double(T), format_double(p.theta1), format_double(p.theta2),
                       format_double(extremal_curve_ip(kind, T))});
        }
    }
    return w.to_string();
}

inline void save_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_text: cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("save_text: write failed for " + path);
}

inline std::string load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_text: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace qmetro
