#include "kcgg/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "kcgg/errors.hpp"
#include "kcgg/io_util.hpp"

namespace kcgg {

using nlohmann::json;

int ModelBundle::label_id(const std::string& name) const {
    if (name.empty()) return -1;
    for (std::size_t i = 0; i < condition_labels.size(); ++i) {
        if (condition_labels[i] == name) return static_cast<int>(i);
    }
    throw ConfigError("ModelBundle: unknown condition label '" + name + "'");
}

namespace {

constexpr char kMagic[8] = {'K', 'C', 'G', 'G', 'N', 'E', 'T', '1'};

json arch_to_json(const NetworkArch& a) {
    return json{{"input_dim", a.input_dim},     {"width", a.width},
                {"num_blocks", a.num_blocks},   {"time_embed_dim", a.time_embed_dim},
                {"cond_embed_dim", a.cond_embed_dim}, {"cond_vocab", a.cond_vocab}};
}

NetworkArch arch_from_json(const json& j) {
    NetworkArch a;
    a.input_dim = j.at("input_dim").get<std::size_t>();
    a.width = j.at("width").get<std::size_t>();
    a.num_blocks = j.at("num_blocks").get<std::size_t>();
    a.time_embed_dim = j.at("time_embed_dim").get<std::size_t>();
    a.cond_embed_dim = j.at("cond_embed_dim").get<std::size_t>();
    a.cond_vocab = j.at("cond_vocab").get<std::size_t>();
    return a;
}

} // namespace

void save_model(const ModelBundle& bundle, const std::string& path) {
    json header;
    header["arch"] = arch_to_json(bundle.net.arch());
    header["normalizer"] = {{"lo", bundle.normalizer.lo()}, {"hi", bundle.normalizer.hi()}};
    header["schedule"] = {{"type", "cosine"}, {"T", bundle.schedule.T}};
    header["condition_labels"] = bundle.condition_labels;
    header["trajectory"] = {{"num_states", bundle.num_states},
                            {"state_dim", bundle.state_dim},
                            {"dt", bundle.dt}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_model: cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    io::write_json_block(out, header);
    for (const Tensor& p : bundle.net.params()) {
        io::write_f64_array(out, p.data(), p.size());
    }
    if (!out) throw IoError("save_model: write failed for '" + path + "'");
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_model: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IoError("load_model: '" + path + "' is not a KCGGNET1 checkpoint");
    }
    json header = io::read_json_block(in);

    NetworkArch arch = arch_from_json(header.at("arch"));
    ScoreNetwork net(arch, 0);
    std::vector<Tensor> params;
    params.reserve(net.param_count());
    for (const Tensor& shape_ref : net.params()) {
        std::vector<double> values(shape_ref.size());
        io::read_f64_array(in, values.data(), values.size());
        params.push_back(Tensor::from_raw(shape_ref.shape(), std::move(values)));
    }
    if (!in) throw IoError("load_model: truncated weight data in '" + path + "'");
    net.set_params(std::move(params));

    const json& nj = header.at("normalizer");
    Normalizer norm = Normalizer::from_bounds(nj.at("lo").get<std::vector<double>>(),
                                              nj.at("hi").get<std::vector<double>>());

    const json& sj = header.at("schedule");
    if (sj.at("type").get<std::string>() != "cosine") {
        throw IoError("load_model: unsupported schedule type in '" + path + "'");
    }
    NoiseSchedule schedule = NoiseSchedule::cosine(sj.at("T").get<std::size_t>());

    const json& tj = header.at("trajectory");
    ModelBundle bundle{std::move(net), std::move(norm), std::move(schedule),
                       header.at("condition_labels").get<std::vector<std::string>>(),
                       tj.at("num_states").get<std::size_t>(),
                       tj.at("state_dim").get<std::size_t>(), tj.at("dt").get<double>()};
    return bundle;
}

} // namespace kcgg
