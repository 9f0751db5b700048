#ifndef CAUSALDNA_JSON_IO_HPP
#define CAUSALDNA_JSON_IO_HPP

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "causaldna/ci.hpp"
#include "causaldna/dna_learn.hpp"
#include "causaldna/graph.hpp"
#include "causaldna/sem.hpp"
#include "causaldna/structure.hpp"

namespace causaldna {

// Vertices are serialized 1-indexed; readers convert back and validate
// through the type constructors, throwing std::invalid_argument or
// std::out_of_range on malformed content.

nlohmann::json dag_to_json(const Dag& g);
Dag dag_from_json(const nlohmann::json& j);

nlohmann::json cpdag_to_json(const Cpdag& c);
Cpdag cpdag_from_json(const nlohmann::json& j);

nlohmann::json dna_to_json(const DnaSet& d);
DnaSet dna_from_json(const nlohmann::json& j);

nlohmann::json layering_to_json(const Layering& layers);
Layering layering_from_json(const nlohmann::json& j);

nlohmann::json sem_to_json(const LinearSem& sem);
LinearSem sem_from_json(const nlohmann::json& j);

nlohmann::json covariance_to_json(const CovarianceMatrix& sigma);
CovarianceMatrix covariance_from_json(const nlohmann::json& j);

nlohmann::json learn_result_to_json(const LearnResult& result);

// Dataset CSV: header X1..Xp, one observation per row.
void write_dataset_csv(std::ostream& out, const Eigen::MatrixXd& data);
Eigen::MatrixXd read_dataset_csv(std::istream& in);

// File wrappers; failures to open or parse raise io_error.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);
Eigen::MatrixXd load_dataset_file(const std::string& path);
void save_dataset_file(const std::string& path, const Eigen::MatrixXd& data);

}  // namespace causaldna

#endif  // CAUSALDNA_JSON_IO_HPP
