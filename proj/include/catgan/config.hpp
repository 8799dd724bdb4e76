#ifndef CATGAN_CONFIG_HPP
#define CATGAN_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

// Flat key = value experiment configuration. '#' starts a comment; unknown
// keys are rejected outright so typos cannot silently fall back to defaults.
struct ExperimentConfig {
    std::string mode = "synthetic";       // synthetic | real
    int k = 2;
    int T = 8;

    // synthetic mode
    int vocab_size_data = 8;              // data words; <pad>/<bos> are added on top
    int oracle_hidden = 16;
    int synth_train = 2000;               // sequences per category
    int synth_test = 500;

    // real mode
    std::string corpus_files;             // comma-separated, one file per category
    std::string test_files;

    std::string out_dir = "runs";
    std::string run_dir;                  // empty: out_dir/run-<timestamp>
    std::uint64_t seed = 1;

    int pretrain_epochs = 20;
    double pretrain_lr = 1e-2;

    int rounds = 30;                      // N
    double tau_tar = 1.0;
    double lambda = 0.001;
    int gen_steps = 1;
    int d_steps = 5;
    int batch_size = 64;
    int eval_n = 64;
    double lr_gen = 1e-2;
    double lr_disc = 1e-2;
    int log_every = 1;
    int checkpoint_every = 1;
    int metric_samples = 256;
    int eval_samples = 512;

    bool no_h = false;
    bool no_t = false;
    bool no_o = false;
    bool persistent_offsets = false;
    bool soft_feedback = false;

    int g_d_emb = 32;
    int g_d_cat = 8;
    int g_d_mem = 64;
    int g_heads = 2;
    int g_slots = 1;
    int g_d_mlp = 64;
    int d_emb = 32;
    int d_filters = 16;
    int d_hidden = 32;
    std::string d_windows = "2,3,4";
    double init_scale = 0.1;
};

namespace config_detail {

struct Field {
    std::string name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v) {
    std::istringstream iss(v);
    T out;
    iss >> out;
    if (iss.fail() || !iss.eof())
        throw std::invalid_argument("expected a number, got '" + v + "'");
    return out;
}

inline const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        auto str = [&](const char* n, std::string ExperimentConfig::* p) {
            f.push_back({n, [p](ExperimentConfig& c, const std::string& v) { c.*p = v; },
                         [p](const ExperimentConfig& c) { return c.*p; }});
        };
        auto num_i = [&](const char* n, int ExperimentConfig::* p) {
            f.push_back({n, [p](ExperimentConfig& c, const std::string& v) { c.*p = parse_num<int>(v); },
                         [p](const ExperimentConfig& c) { return std::to_string(c.*p); }});
        };
        auto num_u = [&](const char* n, std::uint64_t ExperimentConfig::* p) {
            f.push_back({n, [p](ExperimentConfig& c, const std::string& v) { c.*p = parse_num<std::uint64_t>(v); },
                         [p](const ExperimentConfig& c) { return std::to_string(c.*p); }});
        };
        auto num_d = [&](const char* n, double ExperimentConfig::* p) {
            f.push_back({n, [p](ExperimentConfig& c, const std::string& v) { c.*p = parse_num<double>(v); },
                         [p](const ExperimentConfig& c) {
                             std::ostringstream os;
                             os << c.*p;
                             return os.str();
                         }});
        };
        auto boolean = [&](const char* n, bool ExperimentConfig::* p) {
            f.push_back({n, [p](ExperimentConfig& c, const std::string& v) { c.*p = parse_bool(v); },
                         [p](const ExperimentConfig& c) { return std::string(c.*p ? "true" : "false"); }});
        };
        str("mode", &ExperimentConfig::mode);
        num_i("k", &ExperimentConfig::k);
        num_i("T", &ExperimentConfig::T);
        num_i("vocab_size_data", &ExperimentConfig::vocab_size_data);
        num_i("oracle_hidden", &ExperimentConfig::oracle_hidden);
        num_i("synth_train", &ExperimentConfig::synth_train);
        num_i("synth_test", &ExperimentConfig::synth_test);
        str("corpus_files", &ExperimentConfig::corpus_files);
        str("test_files", &ExperimentConfig::test_files);
        str("out_dir", &ExperimentConfig::out_dir);
        str("run_dir", &ExperimentConfig::run_dir);
        num_u("seed", &ExperimentConfig::seed);
        num_i("pretrain_epochs", &ExperimentConfig::pretrain_epochs);
        num_d("pretrain_lr", &ExperimentConfig::pretrain_lr);
        num_i("rounds", &ExperimentConfig::rounds);
        num_d("tau_tar", &ExperimentConfig::tau_tar);
        num_d("lambda", &ExperimentConfig::lambda);
        num_i("gen_steps", &ExperimentConfig::gen_steps);
        num_i("d_steps", &ExperimentConfig::d_steps);
        num_i("batch_size", &ExperimentConfig::batch_size);
        num_i("eval_n", &ExperimentConfig::eval_n);
        num_d("lr_gen", &ExperimentConfig::lr_gen);
        num_d("lr_disc", &ExperimentConfig::lr_disc);
        num_i("log_every", &ExperimentConfig::log_every);
        num_i("checkpoint_every", &ExperimentConfig::checkpoint_every);
        num_i("metric_samples", &ExperimentConfig::metric_samples);
        num_i("eval_samples", &ExperimentConfig::eval_samples);
        boolean("no_h", &ExperimentConfig::no_h);
        boolean("no_t", &ExperimentConfig::no_t);
        boolean("no_o", &ExperimentConfig::no_o);
        boolean("persistent_offsets", &ExperimentConfig::persistent_offsets);
        boolean("soft_feedback", &ExperimentConfig::soft_feedback);
        num_i("g_d_emb", &ExperimentConfig::g_d_emb);
        num_i("g_d_cat", &ExperimentConfig::g_d_cat);
        num_i("g_d_mem", &ExperimentConfig::g_d_mem);
        num_i("g_heads", &ExperimentConfig::g_heads);
        num_i("g_slots", &ExperimentConfig::g_slots);
        num_i("g_d_mlp", &ExperimentConfig::g_d_mlp);
        num_i("d_emb", &ExperimentConfig::d_emb);
        num_i("d_filters", &ExperimentConfig::d_filters);
        num_i("d_hidden", &ExperimentConfig::d_hidden);
        str("d_windows", &ExperimentConfig::d_windows);
        num_d("init_scale", &ExperimentConfig::init_scale);
        return f;
    }();
    return table;
}

} // namespace config_detail

inline void config_set(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& f : config_detail::fields()) {
        if (f.name == key) {
            try {
                f.set(cfg, value);
            } catch (const std::exception& e) {
                throw std::invalid_argument("config key '" + key + "': " + e.what());
            }
            return;
        }
    }
    throw std::invalid_argument("unknown config key: " + key);
}

inline void config_validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (c.mode != "synthetic" && c.mode != "real") fail("mode must be synthetic or real");
    if (c.k < 1) fail("k must be >= 1");
    if (c.T < 1) fail("T must be >= 1");
    if (!(c.tau_tar >= 1.0)) fail("tau_tar must be >= 1");
    if (c.lambda < 0.0) fail("lambda must be >= 0");
    if (c.rounds < 1) fail("rounds must be >= 1");
    if (c.batch_size < 1) fail("batch_size must be >= 1");
    if (c.eval_n < 1) fail("eval_n must be >= 1");
    if (c.gen_steps < 0) fail("gen_steps must be >= 0");
    if (c.d_steps < 0) fail("d_steps must be >= 0");
    if (c.log_every < 1) fail("log_every must be >= 1");
    if (c.checkpoint_every < 1) fail("checkpoint_every must be >= 1");
    if (c.metric_samples < 1) fail("metric_samples must be >= 1");
    if (c.eval_samples < 1) fail("eval_samples must be >= 1");
    if (c.mode == "synthetic" && c.vocab_size_data < 2) fail("vocab_size_data must be >= 2");
    if (c.mode == "real" && c.corpus_files.empty()) fail("real mode needs corpus_files");
    if (c.g_heads < 1 || c.g_d_mem % c.g_heads != 0) fail("g_d_mem must be divisible by g_heads");
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string value = config_detail::trim(line.substr(eq + 1));
        config_set(cfg, key, value);
    }
    return cfg;
}

inline std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    for (const auto& f : config_detail::fields()) os << f.name << " = " << f.get(cfg) << "\n";
    return os.str();
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream iss(s);
    while (std::getline(iss, item, ',')) {
        item = config_detail::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& item : split_csv(s))
        out.push_back(config_detail::parse_num<int>(item));
    return out;
}

} // namespace catgan

#endif // CATGAN_CONFIG_HPP
