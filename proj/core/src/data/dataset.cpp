#include "stlflow/data/dataset.hpp"

#include <fstream>
#include <numeric>

#include "stlflow/stl/json.hpp"
#include "stlflow/stl/semantics.hpp"

namespace stlflow {

nlohmann::json DatasetRecord::to_json() const {
  nlohmann::json trajs = nlohmann::json::array();
  for (const auto &tau : trajectories) trajs.push_back(trajectory_to_json(tau));
  return {{"template", template_name(template_id)},
          {"spec", spec_to_json(spec)},
          {"scene", scene.to_json()},
          {"trajectories", trajs},
          {"robustness", robustness_scores}};
}

DatasetRecord DatasetRecord::from_json(const nlohmann::json &j) {
  DatasetRecord rec;
  rec.template_id = template_from_name(j.at("template"));
  rec.spec = spec_from_json(j.at("spec"));
  rec.scene = SceneSpec::from_json(j.at("scene"));
  for (const auto &tj : j.at("trajectories"))
    rec.trajectories.push_back(trajectory_from_json(tj));
  rec.robustness_scores = j.at("robustness").get<std::vector<double>>();
  return rec;
}

void write_dataset(const Dataset &ds, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot open for writing: " + path);
  out << nlohmann::json{{"version", kDatasetVersion}, {"env", ds.env_name}}.dump()
      << "\n";
  for (const auto &rec : ds.records) out << rec.to_json().dump() << "\n";
}

Dataset read_dataset(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open: " + path);
  std::string line;
  int line_no = 0;
  Dataset ds;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DatasetError("parse error at line " + std::to_string(line_no) + ": " +
                         e.what());
    }
    if (!have_header) {
      int version = j.value("version", -1);
      if (version != kDatasetVersion)
        throw DatasetError("unsupported dataset version " + std::to_string(version) +
                           " (expected " + std::to_string(kDatasetVersion) + ")");
      ds.env_name = j.value("env", "");
      have_header = true;
      continue;
    }
    try {
      ds.records.push_back(DatasetRecord::from_json(j));
    } catch (const std::exception &e) {
      throw DatasetError("bad record at line " + std::to_string(line_no) + ": " +
                         e.what());
    }
  }
  if (!have_header) throw DatasetError("missing dataset header line");
  return ds;
}

bool verify_record(const DatasetRecord &rec) {
  for (const auto &tau : rec.trajectories)
    if (!eval_bool(tau, 0, rec.spec)) return false;
  return true;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset &ds, double train_frac,
                                          uint64_t seed) {
  std::vector<size_t> idx(ds.records.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[std::uniform_int_distribution<size_t>(0, i - 1)(rng)]);
  size_t n_train = static_cast<size_t>(train_frac * static_cast<double>(idx.size()));
  Dataset train{ds.env_name, {}}, val{ds.env_name, {}};
  for (size_t i = 0; i < idx.size(); ++i)
    (i < n_train ? train : val).records.push_back(ds.records[idx[i]]);
  return {std::move(train), std::move(val)};
}

}  // namespace stlflow
