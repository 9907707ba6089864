#pragma once

#include "stlflow/data/templates.hpp"
#include "stlflow/trajectory.hpp"

namespace stlflow {

class DatasetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One spec with its satisfying demonstrations. Every stored trajectory has
// robustness >= 0 against spec at t = 0.
struct DatasetRecord {
  StlPtr spec;
  TemplateId template_id = TemplateId::Single;
  SceneSpec scene;
  std::vector<Trajectory> trajectories;
  std::vector<double> robustness_scores;

  nlohmann::json to_json() const;
  static DatasetRecord from_json(const nlohmann::json &j);
};

struct Dataset {
  std::string env_name;
  std::vector<DatasetRecord> records;
};

inline constexpr int kDatasetVersion = 1;

// JSON-lines file: header line {"version": 1, "env": ...} then one record per
// line. read(write(x)) is identity, byte-for-byte on re-serialization.
void write_dataset(const Dataset &ds, const std::string &path);
Dataset read_dataset(const std::string &path);

// Independent re-verification used on load paths: eval_bool (not robustness)
// at t = 0 for every stored trajectory.
bool verify_record(const DatasetRecord &rec);

// Seeded 80/20 split by record index.
std::pair<Dataset, Dataset> split_dataset(const Dataset &ds, double train_frac,
                                          uint64_t seed);

}  // namespace stlflow
