#ifndef CATGAN_CHECKPOINT_HPP
#define CATGAN_CHECKPOINT_HPP

#include "catgan/adam.hpp"
#include "catgan/discriminator.hpp"
#include "catgan/generator.hpp"
#include "catgan/oracle.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catgan {

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

// Versioned named-array container: magic, version, a JSON manifest (array
// names, shapes, arbitrary metadata), then the raw arrays in manifest order
// as row-major little-endian 32-bit floats.
struct NamedArrays {
    std::vector<std::pair<std::string, ad::Mat>> items;
    nlohmann::json meta;

    void add(const std::string& name, const ad::Mat& m) { items.emplace_back(name, m); }

    const ad::Mat& get(const std::string& name) const {
        for (const auto& [n, m] : items)
            if (n == name) return m;
        throw std::out_of_range("checkpoint: missing array " + name);
    }

    bool has(const std::string& name) const {
        for (const auto& [n, m] : items)
            if (n == name) return true;
        return false;
    }
};

inline constexpr char kCheckpointMagic[4] = {'C', 'G', 'K', '1'};

inline void save_named_arrays(const std::string& path, const NamedArrays& arrays) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);

    nlohmann::json manifest;
    manifest["version"] = 1;
    manifest["meta"] = arrays.meta;
    manifest["arrays"] = nlohmann::json::array();
    for (const auto& [name, m] : arrays.items)
        manifest["arrays"].push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    const std::string header = manifest.dump();

    out.write(kCheckpointMagic, 4);
    const std::uint32_t version = 1;
    const std::uint32_t hlen = static_cast<std::uint32_t>(header.size());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&hlen), 4);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& [name, m] : arrays.items) {
        std::vector<float> buf(static_cast<std::size_t>(m.size()));
        std::size_t idx = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) buf[idx++] = static_cast<float>(m(i, j));
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("write failed for checkpoint: " + path);
}

inline NamedArrays load_named_arrays(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    std::uint32_t version = 0, hlen = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&hlen), 4);
    if (!in || version != 1)
        throw std::runtime_error("unsupported checkpoint version in " + path);
    std::string header(hlen, '\0');
    in.read(header.data(), hlen);
    nlohmann::json manifest = nlohmann::json::parse(header);

    NamedArrays arrays;
    arrays.meta = manifest.value("meta", nlohmann::json::object());
    for (const auto& entry : manifest.at("arrays")) {
        const auto rows = entry.at("rows").get<Eigen::Index>();
        const auto cols = entry.at("cols").get<Eigen::Index>();
        std::vector<float> buf(static_cast<std::size_t>(rows * cols));
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!in) throw std::runtime_error("truncated checkpoint: " + path);
        ad::Mat m(rows, cols);
        std::size_t idx = 0;
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = static_cast<double>(buf[idx++]);
        arrays.items.emplace_back(entry.at("name").get<std::string>(), std::move(m));
    }
    return arrays;
}

namespace detail {

inline void pack_adam(NamedArrays& arrays, const AdamState& opt) {
    arrays.meta["adam"] = {{"step", opt.step}, {"beta1", opt.beta1},
                           {"beta2", opt.beta2}, {"eps", opt.eps}};
    for (const auto& [name, mv] : opt.moments) {
        arrays.add("adam.m." + name, mv.first);
        arrays.add("adam.v." + name, mv.second);
    }
}

inline AdamState unpack_adam(const NamedArrays& arrays) {
    AdamState opt;
    if (!arrays.meta.contains("adam")) return opt;
    const auto& j = arrays.meta["adam"];
    opt.step = j.value("step", 0LL);
    opt.beta1 = j.value("beta1", 0.9);
    opt.beta2 = j.value("beta2", 0.999);
    opt.eps = j.value("eps", 1e-8);
    for (const auto& [name, m] : arrays.items) {
        if (name.rfind("adam.m.", 0) == 0)
            opt.moments[name.substr(7)].first = m;
        else if (name.rfind("adam.v.", 0) == 0)
            opt.moments[name.substr(7)].second = m;
    }
    return opt;
}

} // namespace detail

inline void save_generator(const std::string& path, const GeneratorParams& params,
                           nlohmann::json extra_meta = {}, const AdamState* opt = nullptr) {
    NamedArrays arrays;
    arrays.meta["kind"] = "generator";
    const GeneratorConfig& c = params.cfg;
    arrays.meta["config"] = {{"vocab_size", c.vocab_size}, {"categories", c.categories},
                             {"bos_id", c.bos_id},         {"d_emb", c.d_emb},
                             {"d_cat", c.d_cat},           {"d_mem", c.d_mem},
                             {"heads", c.heads},           {"slots", c.slots},
                             {"d_mlp", c.d_mlp},           {"soft_feedback", c.soft_feedback}};
    if (!extra_meta.is_null()) arrays.meta["extra"] = std::move(extra_meta);
    params.visit([&](const std::string& name, const ad::Mat& m) { arrays.add(name, m); });
    if (opt) detail::pack_adam(arrays, *opt);
    save_named_arrays(path, arrays);
}

inline GeneratorParams load_generator(const std::string& path, AdamState* opt = nullptr,
                                      nlohmann::json* extra_meta = nullptr) {
    NamedArrays arrays = load_named_arrays(path);
    if (arrays.meta.value("kind", "") != "generator")
        throw std::runtime_error("checkpoint is not a generator: " + path);
    const auto& j = arrays.meta.at("config");
    GeneratorConfig cfg;
    cfg.vocab_size = j.at("vocab_size").get<int>();
    cfg.categories = j.at("categories").get<int>();
    cfg.bos_id = j.at("bos_id").get<int>();
    cfg.d_emb = j.at("d_emb").get<int>();
    cfg.d_cat = j.at("d_cat").get<int>();
    cfg.d_mem = j.at("d_mem").get<int>();
    cfg.heads = j.at("heads").get<int>();
    cfg.slots = j.at("slots").get<int>();
    cfg.d_mlp = j.at("d_mlp").get<int>();
    cfg.soft_feedback = j.value("soft_feedback", false);
    GeneratorParams params = GeneratorParams::init(cfg, 0);
    params.visit([&](const std::string& name, ad::Mat& m) {
        const ad::Mat& s = arrays.get(name);
        if (s.rows() != m.rows() || s.cols() != m.cols())
            throw std::runtime_error("checkpoint array shape mismatch: " + name);
        m = s;
    });
    if (opt) *opt = detail::unpack_adam(arrays);
    if (extra_meta) *extra_meta = arrays.meta.value("extra", nlohmann::json::object());
    return params;
}

inline void save_discriminator(const std::string& path, const DiscriminatorParams& params,
                               const AdamState* opt = nullptr) {
    NamedArrays arrays;
    arrays.meta["kind"] = "discriminator";
    const DiscriminatorConfig& c = params.cfg;
    arrays.meta["config"] = {{"vocab_size", c.vocab_size}, {"d_emb", c.d_emb},
                             {"window_sizes", c.window_sizes},
                             {"filters_per_size", c.filters_per_size},
                             {"d_hidden", c.d_hidden}};
    params.visit([&](const std::string& name, const ad::Mat& m) { arrays.add(name, m); });
    if (opt) detail::pack_adam(arrays, *opt);
    save_named_arrays(path, arrays);
}

inline DiscriminatorParams load_discriminator(const std::string& path, AdamState* opt = nullptr) {
    NamedArrays arrays = load_named_arrays(path);
    if (arrays.meta.value("kind", "") != "discriminator")
        throw std::runtime_error("checkpoint is not a discriminator: " + path);
    const auto& j = arrays.meta.at("config");
    DiscriminatorConfig cfg;
    cfg.vocab_size = j.at("vocab_size").get<int>();
    cfg.d_emb = j.at("d_emb").get<int>();
    cfg.window_sizes = j.at("window_sizes").get<std::vector<int>>();
    cfg.filters_per_size = j.at("filters_per_size").get<int>();
    cfg.d_hidden = j.at("d_hidden").get<int>();
    DiscriminatorParams params = DiscriminatorParams::init(cfg, 0);
    params.visit([&](const std::string& name, ad::Mat& m) {
        const ad::Mat& s = arrays.get(name);
        if (s.rows() != m.rows() || s.cols() != m.cols())
            throw std::runtime_error("checkpoint array shape mismatch: " + name);
        m = s;
    });
    if (opt) *opt = detail::unpack_adam(arrays);
    return params;
}

inline void save_oracle(const std::string& path, const OracleModel& oracle) {
    NamedArrays arrays;
    arrays.meta["kind"] = "oracle";
    arrays.meta["config"] = {{"k", oracle.k()},
                             {"vocab_size", oracle.vocab_size()},
                             {"hidden_size", oracle.hidden_size()},
                             {"seed", oracle.seed()},
                             {"start_id", oracle.start_id()}};
    for (int c = 0; c < oracle.k(); ++c) {
        const auto& p = oracle.category(c);
        const std::string pre = "cat" + std::to_string(c) + ".";
        arrays.add(pre + "embed", p.embed);
        arrays.add(pre + "w_x", p.w_x);
        arrays.add(pre + "w_h", p.w_h);
        arrays.add(pre + "bias", p.bias);
        arrays.add(pre + "w_out", p.w_out);
        arrays.add(pre + "b_out", p.b_out);
    }
    save_named_arrays(path, arrays);
}

inline OracleModel load_oracle(const std::string& path) {
    NamedArrays arrays = load_named_arrays(path);
    if (arrays.meta.value("kind", "") != "oracle")
        throw std::runtime_error("checkpoint is not an oracle: " + path);
    const auto& j = arrays.meta.at("config");
    OracleModel oracle(j.at("k").get<int>(), j.at("vocab_size").get<int>(),
                       j.at("hidden_size").get<int>(), j.at("seed").get<std::uint64_t>(),
                       j.at("start_id").get<int>());
    for (int c = 0; c < oracle.k(); ++c) {
        auto& p = oracle.mutable_categories()[static_cast<std::size_t>(c)];
        const std::string pre = "cat" + std::to_string(c) + ".";
        p.embed = arrays.get(pre + "embed");
        p.w_x = arrays.get(pre + "w_x");
        p.w_h = arrays.get(pre + "w_h");
        p.bias = arrays.get(pre + "bias").row(0);
        p.w_out = arrays.get(pre + "w_out");
        p.b_out = arrays.get(pre + "b_out").row(0);
    }
    return oracle;
}

} // namespace catgan

#endif // CATGAN_CHECKPOINT_HPP
