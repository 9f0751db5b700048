#include "causaldna/json_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "causaldna/common.hpp"

namespace causaldna {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const char* who) {
    if (!j.is_object() || !j.contains(key)) {
        throw std::invalid_argument(std::string(who) + ": missing field '" + key + "'");
    }
    return j.at(key);
}

int int_field(const json& j, const char* key, const char* who) {
    const json& value = field(j, key, who);
    if (!value.is_number_integer()) {
        throw std::invalid_argument(std::string(who) + ": field '" + key + "' must be an integer");
    }
    return value.get<int>();
}

int vertex_from_json(const json& value, const char* who) {
    if (!value.is_number_integer()) {
        throw std::invalid_argument(std::string(who) + ": vertices must be integers");
    }
    return value.get<int>() - 1;
}

json pairs_to_json(const std::vector<Edge>& pairs) {
    json out = json::array();
    for (const auto& [u, v] : pairs) {
        out.push_back(json::array({u + 1, v + 1}));
    }
    return out;
}

std::vector<Edge> pairs_from_json(const json& arr, const char* who) {
    if (!arr.is_array()) {
        throw std::invalid_argument(std::string(who) + ": pair list must be an array");
    }
    std::vector<Edge> pairs;
    pairs.reserve(arr.size());
    for (const json& item : arr) {
        if (!item.is_array() || item.size() != 2) {
            throw std::invalid_argument(std::string(who) + ": each pair must be a two-element array");
        }
        pairs.emplace_back(vertex_from_json(item.at(0), who), vertex_from_json(item.at(1), who));
    }
    return pairs;
}

double number_from_json(const json& value, const char* who) {
    if (!value.is_number()) {
        throw std::invalid_argument(std::string(who) + ": expected a number");
    }
    return value.get<double>();
}

std::string format_double(double x) {
    std::array<char, 64> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) {
        throw numeric_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            tokens.push_back(line.substr(start));
            return tokens;
        }
        tokens.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

}  // namespace

json dag_to_json(const Dag& g) {
    json j;
    j["p"] = g.num_vertices();
    j["edges"] = pairs_to_json(g.edges());
    if (g.labels()) {
        j["labels"] = *g.labels();
    }
    return j;
}

Dag dag_from_json(const json& j) {
    int p = int_field(j, "p", "dag_from_json");
    std::vector<Edge> edges = pairs_from_json(field(j, "edges", "dag_from_json"), "dag_from_json");
    std::optional<std::vector<std::string>> labels;
    if (j.contains("labels")) {
        const json& raw = j.at("labels");
        if (!raw.is_array()) {
            throw std::invalid_argument("dag_from_json: field 'labels' must be an array");
        }
        std::vector<std::string> names;
        names.reserve(raw.size());
        for (const json& item : raw) {
            if (!item.is_string()) {
                throw std::invalid_argument("dag_from_json: labels must be strings");
            }
            names.push_back(item.get<std::string>());
        }
        labels = std::move(names);
    }
    return Dag(p, std::move(edges), std::move(labels));
}

json cpdag_to_json(const Cpdag& c) {
    json j;
    j["p"] = c.num_vertices();
    j["edges"] = pairs_to_json(c.directed());
    j["undirected"] = pairs_to_json(c.undirected());
    return j;
}

Cpdag cpdag_from_json(const json& j) {
    int p = int_field(j, "p", "cpdag_from_json");
    std::vector<Edge> directed = pairs_from_json(field(j, "edges", "cpdag_from_json"), "cpdag_from_json");
    std::vector<Edge> undirected =
        pairs_from_json(field(j, "undirected", "cpdag_from_json"), "cpdag_from_json");
    return Cpdag(p, std::move(directed), std::move(undirected));
}

json dna_to_json(const DnaSet& d) {
    json j;
    j["p"] = d.num_vertices();
    j["pairs"] = pairs_to_json(d.pairs());
    return j;
}

DnaSet dna_from_json(const json& j) {
    int p = int_field(j, "p", "dna_from_json");
    DnaSet d(p);
    for (const auto& [u, v] : pairs_from_json(field(j, "pairs", "dna_from_json"), "dna_from_json")) {
        d.add(u, v);
    }
    return d;
}

json layering_to_json(const Layering& layers) {
    json arr = json::array();
    for (const auto& layer : layers) {
        json block = json::array();
        for (int v : layer) {
            block.push_back(v + 1);
        }
        arr.push_back(std::move(block));
    }
    json j;
    j["layers"] = std::move(arr);
    return j;
}

Layering layering_from_json(const json& j) {
    const json& arr = field(j, "layers", "layering_from_json");
    if (!arr.is_array()) {
        throw std::invalid_argument("layering_from_json: field 'layers' must be an array");
    }
    Layering layers;
    layers.reserve(arr.size());
    for (const json& block : arr) {
        if (!block.is_array()) {
            throw std::invalid_argument("layering_from_json: each layer must be an array");
        }
        std::vector<int> layer;
        layer.reserve(block.size());
        for (const json& item : block) {
            int v = vertex_from_json(item, "layering_from_json");
            if (v < 0) {
                throw std::invalid_argument("layering_from_json: vertices must be positive");
            }
            layer.push_back(v);
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

json sem_to_json(const LinearSem& sem) {
    json j;
    j["graph"] = dag_to_json(sem.dag());
    json coefs = json::array();
    const auto& edges = sem.dag().edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        coefs.push_back(json::array({edges[i].first + 1, edges[i].second + 1, sem.coefficients()[i]}));
    }
    j["coefficients"] = std::move(coefs);
    j["variances"] = sem.variances();
    return j;
}

LinearSem sem_from_json(const json& j) {
    Dag g = dag_from_json(field(j, "graph", "sem_from_json"));
    const json& raw_coefs = field(j, "coefficients", "sem_from_json");
    if (!raw_coefs.is_array() || raw_coefs.size() != g.edges().size()) {
        throw std::invalid_argument("sem_from_json: coefficients must list every edge exactly once");
    }
    std::vector<double> coefficients(g.edges().size(), 0.0);
    std::vector<char> seen(g.edges().size(), 0);
    for (const json& item : raw_coefs) {
        if (!item.is_array() || item.size() != 3) {
            throw std::invalid_argument("sem_from_json: each coefficient must be [parent, child, value]");
        }
        Edge e(vertex_from_json(item.at(0), "sem_from_json"), vertex_from_json(item.at(1), "sem_from_json"));
        std::size_t slot = g.edges().size();
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            if (g.edges()[i] == e) {
                slot = i;
                break;
            }
        }
        if (slot == g.edges().size() || seen[slot]) {
            throw std::invalid_argument("sem_from_json: coefficients must list every edge exactly once");
        }
        seen[slot] = 1;
        coefficients[slot] = number_from_json(item.at(2), "sem_from_json");
    }
    const json& raw_vars = field(j, "variances", "sem_from_json");
    if (!raw_vars.is_array()) {
        throw std::invalid_argument("sem_from_json: field 'variances' must be an array");
    }
    std::vector<double> variances;
    variances.reserve(raw_vars.size());
    for (const json& item : raw_vars) {
        variances.push_back(number_from_json(item, "sem_from_json"));
    }
    return LinearSem(std::move(g), std::move(coefficients), std::move(variances));
}

json covariance_to_json(const CovarianceMatrix& sigma) {
    json rows = json::array();
    for (int i = 0; i < sigma.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < sigma.dim(); ++k) {
            row.push_back(sigma(i, k));
        }
        rows.push_back(std::move(row));
    }
    json j;
    j["p"] = sigma.dim();
    j["matrix"] = std::move(rows);
    return j;
}

CovarianceMatrix covariance_from_json(const json& j) {
    int p = int_field(j, "p", "covariance_from_json");
    const json& rows = field(j, "matrix", "covariance_from_json");
    if (p < 1 || !rows.is_array() || static_cast<int>(rows.size()) != p) {
        throw std::invalid_argument("covariance_from_json: matrix must have p rows");
    }
    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != p) {
            throw std::invalid_argument("covariance_from_json: each row must have p entries");
        }
        for (int k = 0; k < p; ++k) {
            m(i, k) = number_from_json(row.at(k), "covariance_from_json");
        }
    }
    return CovarianceMatrix(std::move(m));
}

json learn_result_to_json(const LearnResult& result) {
    json j;
    if (const Cpdag* c = result.cpdag()) {
        j["graph"] = cpdag_to_json(*c);
    } else {
        j["graph"] = dag_to_json(*result.dag());
    }
    if (result.ordering) {
        json order = json::array();
        for (int v : *result.ordering) {
            order.push_back(v + 1);
        }
        j["ordering"] = std::move(order);
    }
    j["ci_tests"] = result.counts.ci_tests;
    j["independences"] = result.counts.independences;
    j["dependences"] = result.counts.dependences;
    return j;
}

void write_dataset_csv(std::ostream& out, const Eigen::MatrixXd& data) {
    if (data.cols() < 1) {
        throw std::invalid_argument("write_dataset_csv: dataset must have at least one column");
    }
    for (int v = 0; v < data.cols(); ++v) {
        out << (v == 0 ? "X" : ",X") << (v + 1);
    }
    out << '\n';
    for (int i = 0; i < data.rows(); ++i) {
        for (int v = 0; v < data.cols(); ++v) {
            if (v > 0) {
                out << ',';
            }
            out << format_double(data(i, v));
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_dataset_csv(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) {
        throw io_error("read_dataset_csv: missing header line");
    }
    std::vector<std::string> header = split_csv_line(line);
    for (std::size_t v = 0; v < header.size(); ++v) {
        if (header[v] != "X" + std::to_string(v + 1)) {
            throw io_error("read_dataset_csv: header must be X1..Xp");
        }
    }
    std::size_t p = header.size();
    std::vector<double> values;
    std::size_t rows = 0;
    while (read_line(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> tokens = split_csv_line(line);
        if (tokens.size() != p) {
            throw io_error("read_dataset_csv: row width does not match the header");
        }
        for (const std::string& token : tokens) {
            double x = 0.0;
            auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
            if (ec != std::errc() || end != token.data() + token.size()) {
                throw io_error("read_dataset_csv: malformed number '" + token + "'");
            }
            values.push_back(x);
        }
        ++rows;
    }
    Eigen::MatrixXd data(static_cast<long>(rows), static_cast<long>(p));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t v = 0; v < p; ++v) {
            data(static_cast<long>(i), static_cast<long>(v)) = values[i * p + v];
        }
    }
    return data;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw io_error("load_json_file: cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw io_error("load_json_file: '" + path + "' is not valid JSON: " + e.what());
    }
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw io_error("save_json_file: cannot open '" + path + "'");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw io_error("save_json_file: write to '" + path + "' failed");
    }
}

Eigen::MatrixXd load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw io_error("load_dataset_file: cannot open '" + path + "'");
    }
    return read_dataset_csv(in);
}

void save_dataset_file(const std::string& path, const Eigen::MatrixXd& data) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw io_error("save_dataset_file: cannot open '" + path + "'");
    }
    write_dataset_csv(out, data);
    if (!out) {
        throw io_error("save_dataset_file: write to '" + path + "' failed");
    }
}

}  // namespace causaldna
