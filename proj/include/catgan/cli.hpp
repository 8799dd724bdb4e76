#ifndef CATGAN_CLI_HPP
#define CATGAN_CLI_HPP

#include "catgan/checkpoint.hpp"
#include "catgan/config.hpp"
#include "catgan/corpus.hpp"
#include "catgan/evolution.hpp"
#include "catgan/metrics.hpp"
#include "catgan/oracle.hpp"
#include "catgan/plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace catgan::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct RunPaths {
    fs::path run_dir;

    fs::path vocab() const { return run_dir / "vocab.txt"; }
    fs::path oracle_ckpt() const { return run_dir / "oracle.ckpt"; }
    fs::path data_dir() const { return run_dir / "data"; }
    fs::path train_file(int c) const { return data_dir() / ("cat" + std::to_string(c) + ".train.txt"); }
    fs::path test_file(int c) const { return data_dir() / ("cat" + std::to_string(c) + ".test.txt"); }
    fs::path pretrain_log() const { return run_dir / "pretrain_log.jsonl"; }
    fs::path gen_pretrained() const { return run_dir / "gen_pretrained.ckpt"; }
    fs::path ckpt_dir() const { return run_dir / "checkpoints"; }
    fs::path gen_round(int r) const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "gen_round_%06d.ckpt", r);
        return ckpt_dir() / buf;
    }
    fs::path disc_round(int r) const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "disc_round_%06d.ckpt", r);
        return ckpt_dir() / buf;
    }
    fs::path metrics_log() const { return run_dir / "metrics.jsonl"; }
    fs::path selection_log() const { return run_dir / "selection.jsonl"; }
    fs::path eval_report_json() const { return run_dir / "eval_report.json"; }
    fs::path eval_report_txt() const { return run_dir / "eval_report.txt"; }
    fs::path plots_dir() const { return run_dir / "plots"; }
};

namespace detail {

inline std::string timestamp_name() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    localtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "run-%Y%m%d-%H%M%S", &tm);
    return buf;
}

// Every artifact of one run lives under a single directory holding a copy of
// the resolved configuration.
inline RunPaths prepare_run_dir(ExperimentConfig& cfg) {
    RunPaths p;
    if (cfg.run_dir.empty()) {
        fs::path base = fs::path(cfg.out_dir) / timestamp_name();
        fs::path candidate = base;
        int suffix = 1;
        while (fs::exists(candidate)) candidate = base.concat("-" + std::to_string(suffix++));
        cfg.run_dir = candidate.string();
    }
    p.run_dir = cfg.run_dir;
    fs::create_directories(p.run_dir);
    std::ofstream out(p.run_dir / "config.resolved.cfg");
    if (!out) throw std::runtime_error("output dir not writable: " + p.run_dir.string());
    out << dump_config(cfg);
    return p;
}

inline ExperimentConfig load_with_overrides(const std::string& config_path,
                                            const std::vector<std::string>& overrides) {
    ExperimentConfig cfg = load_config(config_path);
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        config_set(cfg, config_detail::trim(kv.substr(0, eq)),
                   config_detail::trim(kv.substr(eq + 1)));
    }
    config_validate(cfg);
    return cfg;
}

inline std::vector<std::string> category_train_paths(const ExperimentConfig& cfg, const RunPaths& p) {
    std::vector<std::string> paths;
    if (cfg.mode == "synthetic") {
        for (int c = 0; c < cfg.k; ++c) paths.push_back(p.train_file(c).string());
    } else {
        paths = split_csv(cfg.corpus_files);
        if (static_cast<int>(paths.size()) != cfg.k)
            throw std::invalid_argument("corpus_files must list exactly k files");
    }
    return paths;
}

inline std::optional<std::vector<std::string>> category_test_paths(const ExperimentConfig& cfg,
                                                                   const RunPaths& p) {
    if (cfg.mode == "synthetic") {
        std::vector<std::string> paths;
        for (int c = 0; c < cfg.k; ++c) {
            if (!fs::exists(p.test_file(c))) return std::nullopt;
            paths.push_back(p.test_file(c).string());
        }
        return paths;
    }
    if (cfg.test_files.empty()) return std::nullopt;
    auto paths = split_csv(cfg.test_files);
    if (static_cast<int>(paths.size()) != cfg.k)
        throw std::invalid_argument("test_files must list exactly k files");
    return paths;
}

inline Vocabulary obtain_vocab(const ExperimentConfig& cfg, const RunPaths& p) {
    if (fs::exists(p.vocab())) return Vocabulary::load(p.vocab().string());
    if (cfg.mode == "synthetic")
        throw std::runtime_error("missing vocabulary " + p.vocab().string() + "; run synth first");
    Vocabulary v = Vocabulary::build(split_csv(cfg.corpus_files));
    v.save(p.vocab().string());
    return v;
}

inline GeneratorConfig generator_config(const ExperimentConfig& cfg, const Vocabulary& vocab) {
    GeneratorConfig g;
    g.vocab_size = vocab.size();
    g.categories = cfg.k;
    g.bos_id = vocab.bos_id();
    g.d_emb = cfg.g_d_emb;
    g.d_cat = cfg.g_d_cat;
    g.d_mem = cfg.g_d_mem;
    g.heads = cfg.g_heads;
    g.slots = cfg.g_slots;
    g.d_mlp = cfg.g_d_mlp;
    g.init_scale = cfg.init_scale;
    g.soft_feedback = cfg.soft_feedback;
    return g;
}

inline DiscriminatorConfig discriminator_config(const ExperimentConfig& cfg, const Vocabulary& vocab) {
    DiscriminatorConfig d;
    d.vocab_size = vocab.size();
    d.d_emb = cfg.d_emb;
    d.window_sizes = parse_int_list(cfg.d_windows);
    d.filters_per_size = cfg.d_filters;
    d.d_hidden = cfg.d_hidden;
    d.init_scale = cfg.init_scale;
    d.validate(cfg.T);
    return d;
}

inline void write_sentences(const fs::path& path, const Vocabulary& vocab,
                            const LabeledDataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const TokenSequence& s : ds.sequences) {
        for (std::size_t t = 0; t < s.ids.size(); ++t) {
            if (t) out << ' ';
            out << vocab.token(s.ids[t]);
        }
        out << '\n';
    }
}

inline int find_latest_round(const RunPaths& p) {
    int latest = 0;
    if (!fs::exists(p.ckpt_dir())) return 0;
    for (const auto& entry : fs::directory_iterator(p.ckpt_dir())) {
        const std::string name = entry.path().filename().string();
        int r = 0;
        if (std::sscanf(name.c_str(), "gen_round_%d.ckpt", &r) == 1 &&
            fs::exists(p.disc_round(r)))
            latest = std::max(latest, r);
    }
    return latest;
}

inline std::vector<MetricRecord> read_metric_records(const fs::path& path, int* corrupt = nullptr) {
    std::vector<MetricRecord> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    int bad = 0;
    while (std::getline(in, line)) {
        if (config_detail::trim(line).empty()) continue;
        try {
            records.push_back(MetricRecord::from_json(nlohmann::json::parse(line)));
        } catch (const std::exception&) {
            ++bad;
        }
    }
    if (corrupt) *corrupt = bad;
    return records;
}

inline void print_record(const MetricRecord& r) {
    std::ostringstream os;
    os << "round " << r.round << ": tau=" << r.tau << " obj=" << r.objective_chosen
       << " off=" << r.temp_offset_chosen << " f_temp=" << r.f_temp << " f_obj=" << r.f_obj
       << " nll_div=" << r.nll_div;
    if (r.nll_oracle) os << " nll_oracle=" << *r.nll_oracle;
    if (r.nll_gen) os << " nll_gen=" << *r.nll_gen;
    std::cout << os.str() << std::endl;
}

inline Sentence strip_trailing_pad(const std::vector<int>& ids, int pad_id) {
    Sentence s(ids);
    while (!s.empty() && s.back() == pad_id) s.pop_back();
    return s;
}

} // namespace detail

// synth: materialize oracles and the synthetic corpus they define.
inline int cmd_synth(ExperimentConfig cfg) {
    if (cfg.mode != "synthetic") {
        std::cerr << "synth requires mode = synthetic" << std::endl;
        return kExitUsage;
    }
    RunPaths p = detail::prepare_run_dir(cfg);
    fs::create_directories(p.data_dir());

    std::vector<std::string> words;
    for (int i = 0; i < cfg.vocab_size_data; ++i) words.push_back("w" + std::to_string(i));
    Vocabulary vocab = Vocabulary::from_tokens({kPadToken, kBosToken}, words);
    vocab.save(p.vocab().string());

    OracleModel fresh(cfg.k, vocab.size(), cfg.oracle_hidden,
                      derive_seed(cfg.seed, 0x0eac1eULL), vocab.bos_id());
    save_oracle(p.oracle_ckpt().string(), fresh);
    // reload so the data is drawn from exactly the stored (f32) weights
    OracleModel oracle = load_oracle(p.oracle_ckpt().string());

    std::vector<double> entropy;
    long long total_lines = 0;
    for (int c = 0; c < cfg.k; ++c) {
        LabeledDataset train = oracle.sample(c, cfg.synth_train, cfg.T,
                                             derive_seed(cfg.seed, 0x7a1ULL));
        detail::write_sentences(p.train_file(c), vocab, train);
        total_lines += cfg.synth_train;
        if (cfg.synth_test > 0) {
            LabeledDataset test = oracle.sample(c, cfg.synth_test, cfg.T,
                                                derive_seed(cfg.seed, 0x7e57ULL));
            detail::write_sentences(p.test_file(c), vocab, test);
        }
        auto nll = oracle.nll(train.sequences, train.labels);
        entropy.push_back(nll.per_category[static_cast<std::size_t>(c)]);
    }
    std::cout << "run dir: " << p.run_dir.string() << std::endl;
    std::cout << "wrote " << total_lines << " training sentences across " << cfg.k
              << " categories" << std::endl;
    for (int c = 0; c < cfg.k; ++c)
        std::cout << "oracle ground-truth NLL (category " << c << "): "
                  << entropy[static_cast<std::size_t>(c)] << std::endl;
    std::cout << "oracle ground-truth NLL (harmonic): " << harmonic_mean(entropy) << std::endl;
    return kExitOk;
}

// pretrain: teacher-forced MLE of the generator on the training corpus.
inline int cmd_pretrain(ExperimentConfig cfg) {
    RunPaths p = detail::prepare_run_dir(cfg);
    if (fs::exists(p.gen_pretrained())) {
        std::cout << "pretrained checkpoint already exists: " << p.gen_pretrained().string()
                  << " (skipping)" << std::endl;
        return kExitOk;
    }
    Vocabulary vocab = detail::obtain_vocab(cfg, p);
    LoadStats stats;
    LabeledDataset data = load_labeled(detail::category_train_paths(cfg, p), vocab, cfg.T, &stats);
    if (stats.truncated > 0)
        std::cerr << "warning: truncated " << stats.truncated << " sentences to T=" << cfg.T
                  << std::endl;

    GeneratorParams gen = GeneratorParams::init(detail::generator_config(cfg, vocab),
                                                derive_seed(cfg.seed, 0x9e4e4aULL));
    AdamState opt;
    std::vector<double> log = mle_pretrain(gen, opt, data, cfg.pretrain_epochs, cfg.pretrain_lr,
                                           cfg.batch_size, derive_seed(cfg.seed, 0x41eULL));
    {
        std::ofstream out(p.pretrain_log());
        for (std::size_t e = 0; e < log.size(); ++e) {
            nlohmann::json j{{"epoch", e + 1}, {"nll", log[e]}};
            out << j.dump() << "\n";
            std::cout << "epoch " << (e + 1) << ": nll=" << log[e] << std::endl;
        }
    }
    save_generator(p.gen_pretrained().string(), gen,
                   {{"vocab_hash", vocab.hash()}, {"T", cfg.T}, {"phase", "pretrained"}});
    std::cout << "wrote " << p.gen_pretrained().string() << std::endl;
    return kExitOk;
}

// train: the hierarchical evolutionary adversarial loop, resumable at round
// granularity from the newest checkpoint pair.
inline int cmd_train(ExperimentConfig cfg) {
    RunPaths p = detail::prepare_run_dir(cfg);
    Vocabulary vocab = detail::obtain_vocab(cfg, p);
    LabeledDataset data = load_labeled(detail::category_train_paths(cfg, p), vocab, cfg.T);

    std::optional<LabeledDataset> test;
    if (auto paths = detail::category_test_paths(cfg, p))
        test = load_labeled(*paths, vocab, cfg.T);

    std::optional<OracleModel> oracle;
    if (cfg.mode == "synthetic") {
        if (!fs::exists(p.oracle_ckpt()))
            throw std::runtime_error("missing oracle checkpoint " + p.oracle_ckpt().string() +
                                     "; run synth first");
        oracle = load_oracle(p.oracle_ckpt().string());
    }

    GeneratorParams gen = GeneratorParams::init(detail::generator_config(cfg, vocab), 0);
    AdamState gen_opt;
    DiscriminatorParams disc = DiscriminatorParams::init(detail::discriminator_config(cfg, vocab),
                                                         derive_seed(cfg.seed, 0xd15c17ULL));
    AdamState disc_opt;

    fs::create_directories(p.ckpt_dir());
    int start_round = 1;
    int schedule_pos = 0;
    const int latest = detail::find_latest_round(p);
    if (latest > 0) {
        nlohmann::json extra;
        gen = load_generator(p.gen_round(latest).string(), &gen_opt, &extra);
        disc = load_discriminator(p.disc_round(latest).string(), &disc_opt);
        schedule_pos = extra.value("schedule_pos", latest);
        start_round = latest + 1;
        std::cout << "resuming from round " << latest << std::endl;
        // drop any record past the checkpoint so the log continues cleanly
        for (const fs::path& logp : {p.metrics_log(), p.selection_log()}) {
            std::ifstream in(logp);
            if (!in) continue;
            std::vector<std::string> keep;
            std::string line;
            while (std::getline(in, line)) {
                if (config_detail::trim(line).empty()) continue;
                try {
                    if (nlohmann::json::parse(line).at("round").get<int>() <= latest)
                        keep.push_back(line);
                } catch (const std::exception&) {
                }
            }
            in.close();
            std::ofstream out(logp, std::ios::trunc);
            for (const std::string& l : keep) out << l << "\n";
        }
    } else {
        if (!fs::exists(p.gen_pretrained()))
            throw std::runtime_error("missing pretrained generator " +
                                     p.gen_pretrained().string() + "; run pretrain first");
        nlohmann::json extra;
        gen = load_generator(p.gen_pretrained().string(), nullptr, &extra);
        if (extra.contains("vocab_hash") &&
            extra["vocab_hash"].get<std::uint64_t>() != vocab.hash())
            throw std::runtime_error("pretrained checkpoint was built for another vocabulary");
        std::ofstream(p.metrics_log(), std::ios::trunc);
        std::ofstream(p.selection_log(), std::ios::trunc);
    }

    TrainSettings s;
    s.rounds = cfg.rounds;
    s.tau_tar = cfg.tau_tar;
    s.lambda = cfg.lambda;
    s.gen_steps = cfg.gen_steps;
    s.d_steps = cfg.d_steps;
    s.batch_size = cfg.batch_size;
    s.eval_n = cfg.eval_n;
    s.lr_gen = cfg.lr_gen;
    s.lr_disc = cfg.lr_disc;
    s.log_every = cfg.log_every;
    s.checkpoint_every = cfg.checkpoint_every;
    s.no_h = cfg.no_h;
    s.no_t = cfg.no_t;
    s.no_o = cfg.no_o;
    s.persistent_offsets = cfg.persistent_offsets;
    s.metric_samples = cfg.metric_samples;
    s.seed = cfg.seed;

    std::ofstream metrics_out(p.metrics_log(), std::ios::app);
    std::ofstream selection_out(p.selection_log(), std::ios::app);

    TrainContext ctx;
    ctx.train_data = &data;
    ctx.test_data = test ? &*test : nullptr;
    ctx.oracle = oracle ? &*oracle : nullptr;
    ctx.on_record = [&](const MetricRecord& r) {
        metrics_out << r.to_json().dump() << "\n";
        metrics_out.flush();
        detail::print_record(r);
    };
    ctx.on_selection = [&](const SelectionRecord& r) {
        selection_out << r.to_json().dump() << "\n";
        selection_out.flush();
    };
    ctx.on_checkpoint = [&](int round, const GeneratorParams& g, const AdamState& go,
                            const DiscriminatorParams& d, const AdamState& dopt, int pos) {
        save_generator(p.gen_round(round).string(), g,
                       {{"vocab_hash", vocab.hash()}, {"T", cfg.T}, {"round", round},
                        {"schedule_pos", pos}, {"tau_tar", cfg.tau_tar}, {"N", cfg.rounds}},
                       &go);
        save_discriminator(p.disc_round(round).string(), d, &dopt);
    };

    if (start_round > s.rounds) {
        std::cout << "training already complete at round " << latest << std::endl;
        return kExitOk;
    }
    train_adversarial(gen, gen_opt, disc, disc_opt, s, ctx, start_round, schedule_pos);
    std::cout << "training complete; metrics in " << p.metrics_log().string() << std::endl;
    return kExitOk;
}

// sample: decode sentences from a generator checkpoint. tau rescales the
// output logits before ancestral sampling (tau = 1 reproduces training-time
// Gumbel-Max sampling exactly; larger tau sharpens).
inline int cmd_sample(const std::string& checkpoint, const std::string& vocab_path,
                      int category, int n, double tau, std::uint64_t seed,
                      const std::string& out_path) {
    nlohmann::json extra;
    GeneratorParams gen = load_generator(checkpoint, nullptr, &extra);
    Vocabulary vocab = Vocabulary::load(vocab_path);
    if (vocab.size() != gen.cfg.vocab_size)
        throw std::runtime_error("vocabulary size does not match the checkpoint");
    if (category >= gen.cfg.categories) {
        std::cerr << "category " << category << " out of range (k=" << gen.cfg.categories << ")"
                  << std::endl;
        return kExitUsage;
    }
    if (!(tau > 0.0)) {
        std::cerr << "tau must be positive" << std::endl;
        return kExitUsage;
    }
    if (tau != 1.0) {  // logit scaling == temperature-scaled sampling
        gen.w_out *= tau;
        gen.b_out *= tau;
    }

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        os = &file;
    }

    const int k = gen.cfg.categories;
    const bool all = category < 0;
    const int seq_len = extra.value("T", 16);

    auto emit = [&](int c) {
        std::vector<int> cats(static_cast<std::size_t>(n), c);
        Eigen::MatrixXi ids = sample_hard(gen, cats, seq_len,
                                          derive_seed(seed, 0x5a3eULL, static_cast<std::uint64_t>(c)));
        for (int i = 0; i < n; ++i) {
            if (all && k > 1) *os << "cat=" << c << '\t';
            for (int t = 0; t < seq_len; ++t) {
                if (t) *os << ' ';
                *os << vocab.token(ids(i, t));
            }
            *os << '\n';
        }
    };
    if (all)
        for (int c = 0; c < k; ++c) emit(c);
    else
        emit(category);
    return kExitOk;
}

// eval: the full metric suite against the newest (or given) checkpoint.
inline int cmd_eval(ExperimentConfig cfg, std::string checkpoint = "") {
    RunPaths p = detail::prepare_run_dir(cfg);
    Vocabulary vocab = detail::obtain_vocab(cfg, p);

    if (checkpoint.empty()) {
        const int latest = detail::find_latest_round(p);
        if (latest > 0)
            checkpoint = p.gen_round(latest).string();
        else if (fs::exists(p.gen_pretrained()))
            checkpoint = p.gen_pretrained().string();
        else
            throw std::runtime_error("no checkpoint found under " + p.run_dir.string());
    }
    GeneratorParams gen = load_generator(checkpoint);
    if (vocab.size() != gen.cfg.vocab_size)
        throw std::runtime_error("vocabulary size does not match the checkpoint");

    auto test_paths = detail::category_test_paths(cfg, p);
    if (!test_paths) throw std::runtime_error("eval needs test data (test_files or synth output)");
    LabeledDataset test = load_labeled(*test_paths, vocab, cfg.T);

    MetricsReport report;
    report.categories = cfg.k;
    report.samples_per_category = cfg.eval_samples;
    report.seed = cfg.seed;

    const std::uint64_t mseed = derive_seed(cfg.seed, 0x3e7a1ULL);
    std::vector<double> div_vals, gen_vals;
    for (int c = 0; c < cfg.k; ++c) {
        div_vals.push_back(nll_div(gen, c, cfg.eval_samples, cfg.T,
                                   derive_seed(mseed, 1, static_cast<std::uint64_t>(c))));
        gen_vals.push_back(nll_gen(gen, test, c));
    }
    report.set("nll_div", div_vals);
    report.set("nll_gen", gen_vals);

    if (cfg.mode == "synthetic") {
        OracleModel oracle = load_oracle(p.oracle_ckpt().string());
        std::vector<double> vals;
        for (int c = 0; c < cfg.k; ++c)
            vals.push_back(nll_oracle_metric(oracle, gen, c, cfg.eval_samples, cfg.T,
                                             derive_seed(mseed, 2, static_cast<std::uint64_t>(c))));
        report.set("nll_oracle", vals);
    }

    for (int order = 2; order <= 5; ++order) {
        std::vector<double> vals;
        for (int c = 0; c < cfg.k; ++c) {
            std::vector<Sentence> refs;
            for (std::size_t i = 0; i < test.size(); ++i)
                if (test.labels[i] == c)
                    refs.push_back(detail::strip_trailing_pad(test.sequences[i].ids, vocab.pad_id()));
            std::vector<int> cats(static_cast<std::size_t>(cfg.eval_samples), c);
            Eigen::MatrixXi ids = sample_hard(gen, cats, cfg.T,
                                              derive_seed(mseed, 3, static_cast<std::uint64_t>(c)));
            std::vector<Sentence> cands;
            for (int i = 0; i < cfg.eval_samples; ++i) {
                std::vector<int> row(static_cast<std::size_t>(cfg.T));
                for (int t = 0; t < cfg.T; ++t) row[static_cast<std::size_t>(t)] = ids(i, t);
                cands.push_back(detail::strip_trailing_pad(row, vocab.pad_id()));
            }
            vals.push_back(bleu_n(cands, refs, order));
        }
        report.set("bleu-" + std::to_string(order), vals);
    }

    {
        std::ofstream out(p.eval_report_json());
        out << report.to_json().dump(2) << "\n";
    }
    {
        std::ofstream out(p.eval_report_txt());
        out << report.to_table();
    }
    std::cout << report.to_table();
    std::cout << "wrote " << p.eval_report_json().string() << std::endl;
    return kExitOk;
}

// plot: training curves from a metrics log; round 0 marks the end of
// pretraining and is drawn as a dashed boundary.
inline int cmd_plot(const std::string& log_path, const std::string& out_dir) {
    int corrupt = 0;
    std::vector<MetricRecord> records = cli::detail::read_metric_records(log_path, &corrupt);
    if (corrupt > 0)
        std::cerr << "warning: skipped " << corrupt << " corrupt log lines" << std::endl;
    if (records.empty()) throw std::runtime_error("no readable records in " + log_path);

    fs::create_directories(out_dir);
    bool any_boundary = false;
    for (const auto& r : records)
        if (r.round == 0) any_boundary = true;
    std::optional<double> boundary;
    if (any_boundary) boundary = 0.0;

    auto emit = [&](const std::string& name, auto getter) {
        PlotSeries s;
        for (const auto& r : records) {
            auto v = getter(r);
            if (v) {
                s.x.push_back(r.round);
                s.y.push_back(*v);
            }
        }
        if (s.x.empty()) return false;
        const std::string path = (fs::path(out_dir) / (name + ".png")).string();
        render_line_chart(path, name + " vs round", "round", name, s, boundary,
                          "end of pretraining");
        std::cout << "wrote " << path << std::endl;
        return true;
    };
    emit("nll_oracle", [](const MetricRecord& r) { return r.nll_oracle; });
    emit("nll_div", [](const MetricRecord& r) -> std::optional<double> { return r.nll_div; });
    emit("nll_gen", [](const MetricRecord& r) { return r.nll_gen; });
    return kExitOk;
}

inline int run(std::vector<std::string> args) {
    CLI::App app{"category-aware GAN for category text generation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    auto add_config_opts = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--set", overrides, "override a config key (key=value, repeatable)");
    };

    CLI::App* synth = app.add_subcommand("synth", "create oracles and synthetic data");
    add_config_opts(synth);
    CLI::App* pretrain = app.add_subcommand("pretrain", "MLE pretraining of the generator");
    add_config_opts(pretrain);
    CLI::App* train = app.add_subcommand("train", "hierarchical evolutionary adversarial training");
    add_config_opts(train);
    CLI::App* evalc = app.add_subcommand("eval", "compute the metric suite for a checkpoint");
    add_config_opts(evalc);
    std::string eval_ckpt;
    evalc->add_option("--checkpoint", eval_ckpt, "generator checkpoint (default: newest in run)");

    CLI::App* sample = app.add_subcommand("sample", "decode sentences from a checkpoint");
    std::string s_ckpt, s_vocab, s_out;
    int s_cat = -1, s_n = 10;
    double s_tau = 1.0;
    std::uint64_t s_seed = 1;
    sample->add_option("--checkpoint", s_ckpt, "generator checkpoint")->required();
    sample->add_option("--vocab", s_vocab, "vocabulary file")->required();
    sample->add_option("--category", s_cat, "category id (default: all categories)");
    sample->add_option("--n", s_n, "sentences per category");
    sample->add_option("--tau", s_tau, "sampling temperature (logit scale)");
    sample->add_option("--seed", s_seed, "sampling seed");
    sample->add_option("--out", s_out, "output file (default: stdout)");

    CLI::App* plot = app.add_subcommand("plot", "render training curves from a metrics log");
    std::string p_log, p_out = "plots";
    plot->add_option("--log", p_log, "metrics log (jsonl)")->required();
    plot->add_option("--out-dir", p_out, "directory for the images");

    std::vector<const char*> argv;
    argv.push_back("catgan");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(detail::load_with_overrides(config_path, overrides));
        if (pretrain->parsed())
            return cmd_pretrain(detail::load_with_overrides(config_path, overrides));
        if (train->parsed()) return cmd_train(detail::load_with_overrides(config_path, overrides));
        if (evalc->parsed())
            return cmd_eval(detail::load_with_overrides(config_path, overrides), eval_ckpt);
        if (sample->parsed())
            return cmd_sample(s_ckpt, s_vocab, s_cat, s_n, s_tau, s_seed, s_out);
        if (plot->parsed()) return cmd_plot(p_log, p_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace catgan::cli

#endif // CATGAN_CLI_HPP
