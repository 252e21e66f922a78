#include "lplab/model.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace lplab {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("invalid JSON: ") + e.what());
    }
}

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(std::string("missing field '") + key + "'");
    if (!j.at(key).is_number()) throw Error(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

MatrixXd matrix(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
    if (!j.contains(key)) throw Error(std::string("missing field '") + key + "'");
    const json& a = j.at(key);
    if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows)
        throw Error(std::string("field '") + key + "' must have " + std::to_string(rows) + " rows");
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = a.at(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw Error(std::string("field '") + key + "' row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row.at(c).is_number())
                throw Error(std::string("field '") + key + "' has a non-numeric entry");
            m(i, c) = row.at(c).get<double>();
        }
    }
    return m;
}

json to_rows(const MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        a.push_back(row);
    }
    return a;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

QarParams qar_params_from_json(const std::string& text) {
    const json j = parse(text);
    QarParams p;
    p.phi1 = number(j, "phi1");
    p.phi2 = number(j, "phi2");
    p.gamma = number(j, "gamma");
    p.sigma = number(j, "sigma");
    p.validate();
    return p;
}

std::string qar_params_to_json(const QarParams& p) {
    json j = {{"phi1", p.phi1}, {"phi2", p.phi2}, {"gamma", p.gamma}, {"sigma", p.sigma}};
    return j.dump(2);
}

QvarParams qvar_params_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw Error("missing or non-integer field 'n'");
    const int n = j.at("n").get<int>();
    if (n < 1) throw Error("field 'n' must be at least 1");
    return QvarParams(matrix(j, "Phi1", n, n), matrix(j, "Phi2", n, vech_size(n)),
                      matrix(j, "Gamma", n, n), matrix(j, "Sigma", n, n));
}

std::string qvar_params_to_json(const QvarParams& p) {
    json j = {{"n", p.n()},
              {"Phi1", to_rows(p.phi1())},
              {"Phi2", to_rows(p.phi2())},
              {"Gamma", to_rows(p.gamma())},
              {"Sigma", to_rows(p.sigma())}};
    return j.dump(2);
}

QarParams load_qar_params(const std::string& path) { return qar_params_from_json(read_file(path)); }

QvarParams load_qvar_params(const std::string& path) {
    return qvar_params_from_json(read_file(path));
}

}  // namespace lplab
