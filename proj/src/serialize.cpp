#include "secdss/serialize.hpp"

#include <fstream>
#include <sstream>

namespace secdss {

Json field_to_json(const Field& f) {
    Json j;
    j["p"] = f.characteristic();
    j["m"] = f.degree();
    j["modulus"] = f.modulus();
    return j;
}

FieldPtr field_from_json(const Json& j) {
    std::vector<Field::Elem> mod = j.at("modulus").get<std::vector<Field::Elem>>();
    return Field::make(j.at("p").get<std::uint32_t>(), j.at("m").get<int>(), mod);
}

Json matrix_to_json(const Mat<Field>& m) {
    Json j;
    j["field"] = field_to_json(*m.field());
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<Field::Elem> entries;
    entries.reserve(static_cast<size_t>(m.rows()) * m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) entries.push_back(m(r, c));
    j["entries"] = entries;
    return j;
}

Mat<Field> matrix_from_json(const Json& j) {
    FieldPtr f = field_from_json(j.at("field"));
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    auto entries = j.at("entries").get<std::vector<Field::Elem>>();
    if (static_cast<int>(entries.size()) != rows * cols)
        throw std::invalid_argument("matrix entry count mismatch");
    Mat<Field> m(f, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            Field::Elem e = entries[static_cast<size_t>(r) * cols + c];
            m(r, c) = static_cast<Field::Elem>(f->element(e));
        }
    return m;
}

Json params_to_json(const DssParams& p) {
    Json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["d"] = p.d;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["field"] = field_to_json(*p.field);
    return j;
}

DssParams params_from_json(const Json& j) {
    DssParams p;
    p.n = j.at("n").get<int>();
    p.k = j.at("k").get<int>();
    p.d = j.at("d").get<int>();
    p.alpha = j.at("alpha").get<int>();
    p.beta = j.at("beta").get<int>();
    p.field = field_from_json(j.at("field"));
    p.validate();
    return p;
}

Json code_to_json(const MsrCode& code) {
    Json j;
    j["params"] = params_to_json(code.params);
    Json coding = Json::array();
    for (const auto& row : code.coding) {
        Json parity = Json::array();
        for (const auto& m : row) parity.push_back(matrix_to_json(m));
        coding.push_back(std::move(parity));
    }
    j["coding"] = std::move(coding);
    Json repair = Json::array();
    for (int helper = 0; helper < code.params.n; ++helper)
        for (int failed = 0; failed < code.params.k; ++failed) {
            if (helper == failed) continue;
            Json entry;
            entry["helper"] = helper + 1;
            entry["failed"] = failed + 1;
            entry["matrix"] = matrix_to_json(code.repair[helper][failed]);
            repair.push_back(std::move(entry));
        }
    j["repair"] = std::move(repair);
    return j;
}

MsrCode code_from_json(const Json& j) {
    MsrCode code;
    code.params = params_from_json(j.at("params"));
    const auto& p = code.params;
    const auto& coding = j.at("coding");
    if (static_cast<int>(coding.size()) != p.parity_count())
        throw std::invalid_argument("coding matrix row count mismatch");
    code.coding.resize(p.parity_count());
    for (int t = 0; t < p.parity_count(); ++t) {
        if (static_cast<int>(coding[t].size()) != p.k)
            throw std::invalid_argument("coding matrix column count mismatch");
        for (const auto& mj : coding[t]) {
            Mat<Field> m = matrix_from_json(mj);
            if (m.rows() != p.alpha || m.cols() != p.alpha || !m.field()->same(*p.field))
                throw std::invalid_argument("bad coding matrix shape");
            code.coding[t].push_back(std::move(m));
        }
    }
    code.repair.assign(p.n, std::vector<Mat<Field>>(p.k));
    for (const auto& entry : j.at("repair")) {
        int helper = entry.at("helper").get<int>() - 1;
        int failed = entry.at("failed").get<int>() - 1;
        if (helper < 0 || helper >= p.n || failed < 0 || failed >= p.k || helper == failed)
            throw std::invalid_argument("bad repair matrix ids");
        Mat<Field> m = matrix_from_json(entry.at("matrix"));
        if (m.rows() != p.beta || m.cols() != p.alpha || !m.field()->same(*p.field))
            throw std::invalid_argument("bad repair matrix shape");
        code.repair[helper][failed] = std::move(m);
    }
    for (int helper = 0; helper < p.n; ++helper)
        for (int failed = 0; failed < p.k; ++failed)
            if (helper != failed && code.repair[helper][failed].rows() == 0)
                throw std::invalid_argument("missing repair matrix");
    return code;
}

Json pattern_to_json(const EavesdropperPattern& p) {
    Json j;
    std::vector<int> es, ed;
    for (int i : p.stored_only) es.push_back(i + 1);
    for (int i : p.repair_observed) ed.push_back(i + 1);
    j["stored_only"] = es;
    j["repair_observed"] = ed;
    j["l1"] = p.l1();
    j["l2"] = p.l2();
    return j;
}

EavesdropperPattern pattern_from_json(const Json& j) {
    EavesdropperPattern p;
    for (int i : j.at("stored_only").get<std::vector<int>>()) p.stored_only.push_back(i - 1);
    for (int i : j.at("repair_observed").get<std::vector<int>>())
        p.repair_observed.push_back(i - 1);
    return p;
}

Json rational_to_json(const Rational& r) {
    Json j;
    j["num"] = r.num;
    j["den"] = r.den;
    return j;
}

Json leakage_report_to_json(const LeakageReport& r) {
    Json j;
    j["pattern"] = pattern_to_json(r.pattern);
    j["view_rank"] = r.view_rank;
    Json residuals = Json::array();
    for (const auto& nr : r.per_node_residual) {
        Json entry;
        entry["node"] = nr.node + 1;
        entry["alpha"] = nr.alpha;
        entry["repair_dim"] = nr.repair_dim;
        residuals.push_back(std::move(entry));
    }
    j["per_node_residual"] = std::move(residuals);
    j["thm1_bound"] = rational_to_json(r.bound);
    j["secrecy_ok"] = r.secrecy_ok;
    return j;
}

Json capacity_search_to_json(const CapacitySearchResult& r) {
    Json j;
    j["achieved_positions"] = r.achieved_positions;
    j["achieved_base_symbols"] = r.achieved_base_symbols;
    j["upper_bound_positions"] = rational_to_json(r.upper_bound_positions);
    j["position_base_symbols"] = r.tower_degree;
    Json cert = Json::array();
    for (const auto& c : r.certificate) {
        Json entry;
        entry["pattern"] = pattern_to_json(c.pattern);
        entry["ok"] = c.ok;
        cert.push_back(std::move(entry));
    }
    j["certificate"] = std::move(cert);
    if (r.tight_failure) j["tight_failure"] = pattern_to_json(*r.tight_failure);
    return j;
}

std::string capacity_csv_header() { return "n,k,d,alpha,l1,l2,bound,achieved"; }

std::string capacity_csv_row(int n, int k, int d, int alpha, int l1, int l2,
                             const Rational& bound, const std::string& achieved) {
    std::ostringstream os;
    os << n << ',' << k << ',' << d << ',' << alpha << ',' << l1 << ',' << l2 << ','
       << bound.str() << ',' << achieved;
    return os.str();
}

std::string write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed: " + path);
    return path;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace secdss
