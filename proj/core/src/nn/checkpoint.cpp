#include "stlflow/nn/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace stlflow::nn {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

json config_to_json(const FlowConfig &cfg) {
  return json{{"T", cfg.T},
              {"n", cfg.n},
              {"m", cfg.m},
              {"dt", cfg.dt},
              {"hidden", cfg.hidden},
              {"time_embed_dim", cfg.time_embed_dim},
              {"ode_steps", cfg.ode_steps},
              {"gcn",
               {{"layers", cfg.gcn.layers},
                {"hidden", cfg.gcn.hidden},
                {"out_dim", cfg.gcn.out_dim},
                {"time_scale", cfg.gcn.time_scale},
                {"coord_scale", cfg.gcn.coord_scale}}}};
}

FlowConfig config_from_json(const json &j) {
  FlowConfig cfg;
  cfg.T = j.at("T").get<int>();
  cfg.n = j.at("n").get<int>();
  cfg.m = j.at("m").get<int>();
  cfg.dt = j.at("dt").get<double>();
  cfg.hidden = j.at("hidden").get<std::vector<int>>();
  cfg.time_embed_dim = j.at("time_embed_dim").get<int>();
  cfg.ode_steps = j.at("ode_steps").get<int>();
  const json &g = j.at("gcn");
  cfg.gcn.layers = g.at("layers").get<int>();
  cfg.gcn.hidden = g.at("hidden").get<int>();
  cfg.gcn.out_dim = g.at("out_dim").get<int>();
  cfg.gcn.time_scale = g.at("time_scale").get<double>();
  cfg.gcn.coord_scale = g.at("coord_scale").get<double>();
  return cfg;
}

}  // namespace

void save_checkpoint(const FlowModel &model, const std::string &path) {
  auto params = model.params();
  json shapes = json::array();
  for (const auto &p : params) shapes.push_back({p.rows(), p.cols()});
  json header{{"version", 1},
              {"cfg", config_to_json(model.cfg)},
              {"norm_mean", model.norm_mean},
              {"norm_std", model.norm_std},
              {"seed", model.seed},
              {"epoch", model.epoch},
              {"shapes", shapes}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open for writing: " + path);
  out << header.dump() << '\n';
  for (const auto &p : params)
    out.write(reinterpret_cast<const char *>(p.data().data()),
              static_cast<std::streamsize>(p.data().size() * sizeof(double)));
  if (!out) throw CheckpointError("write failed: " + path);
}

FlowModel load_checkpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw CheckpointError("missing header: " + path);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception &e) {
    throw CheckpointError(std::string("bad header: ") + e.what());
  }
  if (header.value("version", 0) != 1)
    throw CheckpointError("unsupported checkpoint version");

  Rng rng(0);
  FlowModel model(config_from_json(header.at("cfg")), rng);
  model.norm_mean = header.at("norm_mean").get<std::vector<double>>();
  model.norm_std = header.at("norm_std").get<std::vector<double>>();
  model.seed = header.at("seed").get<uint64_t>();
  model.epoch = header.at("epoch").get<long>();
  if (model.norm_mean.size() != size_t(model.cfg.n + model.cfg.m) ||
      model.norm_std.size() != model.norm_mean.size())
    throw CheckpointError("normalization size mismatch");

  auto params = model.params();
  const json &shapes = header.at("shapes");
  if (shapes.size() != params.size())
    throw CheckpointError("parameter count mismatch");
  for (size_t k = 0; k < params.size(); ++k) {
    if (shapes[k][0].get<int>() != params[k].rows() ||
        shapes[k][1].get<int>() != params[k].cols())
      throw CheckpointError("parameter shape mismatch");
    in.read(reinterpret_cast<char *>(params[k].data().data()),
            static_cast<std::streamsize>(params[k].data().size() * sizeof(double)));
    if (!in) throw CheckpointError("truncated parameter block: " + path);
  }
  return model;
}

}  // namespace stlflow::nn
