#include "catgan/cli.hpp"

#include "helpers/temp_dir.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>

using namespace catgan;
using catgan_tests::TempDir;
using catgan_tests::slurp;

namespace {

std::string smoke_config(const TempDir& dir, const std::string& run_name) {
    std::ostringstream os;
    os << "mode = synthetic\n"
          "k = 2\n"
          "T = 5\n"
          "vocab_size_data = 8\n"
          "oracle_hidden = 6\n"
          "synth_train = 60\n"
          "synth_test = 20\n"
          "seed = 11\n"
          "pretrain_epochs = 2\n"
          "batch_size = 12\n"
          "rounds = 2\n"
          "d_steps = 1\n"
          "eval_n = 8\n"
          "metric_samples = 16\n"
          "eval_samples = 16\n"
          "g_d_emb = 4\n"
          "g_d_cat = 2\n"
          "g_d_mem = 8\n"
          "g_heads = 2\n"
          "g_slots = 1\n"
          "g_d_mlp = 8\n"
          "d_emb = 4\n"
          "d_filters = 4\n"
          "d_hidden = 8\n"
          "d_windows = 2,3\n";
    os << "run_dir = " << (dir.path() / run_name).string() << "\n";
    return dir.write(run_name + ".cfg", os.str());
}

int count_lines(const std::string& path) {
    std::ifstream in(path);
    int n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

} // namespace

TEST_CASE("cli end-to-end smoke: synth, pretrain, train, sample, eval, plot") {
    TempDir dir;
    const std::string cfg = smoke_config(dir, "runA");
    const std::string run = (dir.path() / "runA").string();

    REQUIRE(cli::run({"synth", "--config", cfg}) == 0);
    REQUIRE(count_lines(run + "/data/cat0.train.txt") == 60);
    REQUIRE(count_lines(run + "/data/cat1.train.txt") == 60);
    REQUIRE(count_lines(run + "/data/cat0.test.txt") == 20);
    REQUIRE(std::filesystem::exists(run + "/vocab.txt"));
    REQUIRE(std::filesystem::exists(run + "/oracle.ckpt"));
    REQUIRE(std::filesystem::exists(run + "/config.resolved.cfg"));

    REQUIRE(cli::run({"pretrain", "--config", cfg}) == 0);
    REQUIRE(std::filesystem::exists(run + "/gen_pretrained.ckpt"));
    REQUIRE(count_lines(run + "/pretrain_log.jsonl") == 2);
    // rerun skips quietly
    REQUIRE(cli::run({"pretrain", "--config", cfg}) == 0);

    REQUIRE(cli::run({"train", "--config", cfg}) == 0);
    REQUIRE(count_lines(run + "/metrics.jsonl") == 3);  // rounds 0..2
    REQUIRE(count_lines(run + "/selection.jsonl") == 2);
    REQUIRE(std::filesystem::exists(run + "/checkpoints/gen_round_000002.ckpt"));

    // metrics log carries the documented fields
    {
        std::ifstream in(run + "/metrics.jsonl");
        std::string line;
        std::getline(in, line);
        auto j = nlohmann::json::parse(line);
        REQUIRE(j["round"] == 0);
        REQUIRE(j.contains("tau"));
        REQUIRE(j.contains("f_temp"));
        REQUIRE(j.contains("nll_div"));
        REQUIRE(j.contains("nll_oracle"));  // synthetic mode
        REQUIRE(j.contains("nll_gen"));     // test files exist
    }

    SECTION("sample") {
        const std::string ckpt = run + "/checkpoints/gen_round_000002.ckpt";
        const std::string out = dir.file("samples.txt");
        REQUIRE(cli::run({"sample", "--checkpoint", ckpt, "--vocab", run + "/vocab.txt",
                          "--category", "0", "--n", "5", "--out", out}) == 0);
        REQUIRE(count_lines(out) == 5);

        const std::string out2 = dir.file("samples2.txt");
        REQUIRE(cli::run({"sample", "--checkpoint", ckpt, "--vocab", run + "/vocab.txt",
                          "--category", "0", "--n", "5", "--out", out2}) == 0);
        REQUIRE(slurp(out) == slurp(out2));  // fixed default seed

        const std::string out3 = dir.file("samples3.txt");
        REQUIRE(cli::run({"sample", "--checkpoint", ckpt, "--vocab", run + "/vocab.txt",
                          "--n", "3", "--out", out3}) == 0);
        REQUIRE(count_lines(out3) == 6);  // n per category when k = 2
        std::ifstream in(out3);
        std::string line;
        std::getline(in, line);
        REQUIRE(line.rfind("cat=0\t", 0) == 0);

        REQUIRE(cli::run({"sample", "--checkpoint", ckpt, "--vocab", run + "/vocab.txt",
                          "--category", "7", "--n", "1"}) == 1);
    }

    SECTION("eval and plot") {
        REQUIRE(cli::run({"eval", "--config", cfg}) == 0);
        auto report = nlohmann::json::parse(slurp(run + "/eval_report.json"));
        REQUIRE(report["per_category"].contains("nll_oracle"));
        REQUIRE(report["per_category"].contains("nll_gen"));
        REQUIRE(report["per_category"].contains("nll_div"));
        REQUIRE(report["per_category"].contains("bleu-4"));
        // harmonic values recompute from the per-category fields
        for (auto it = report["per_category"].begin(); it != report["per_category"].end(); ++it) {
            const auto vals = it.value().get<std::vector<double>>();
            REQUIRE(report["harmonic"][it.key()].get<double>() ==
                    Catch::Approx(harmonic_mean(vals)).margin(1e-12));
        }

        REQUIRE(cli::run({"plot", "--log", run + "/metrics.jsonl", "--out-dir",
                          run + "/plots"}) == 0);
        REQUIRE(std::filesystem::exists(run + "/plots/nll_oracle.png"));
        REQUIRE(std::filesystem::exists(run + "/plots/nll_div.png"));
    }

    SECTION("training resumes at the next round with no duplicate records") {
        REQUIRE(cli::run({"train", "--config", cfg, "--set", "rounds=4"}) == 0);
        std::ifstream in(run + "/metrics.jsonl");
        std::string line;
        std::vector<int> rounds;
        while (std::getline(in, line))
            if (!line.empty()) rounds.push_back(nlohmann::json::parse(line)["round"].get<int>());
        REQUIRE(rounds == std::vector<int>{0, 1, 2, 3, 4});
    }
}

TEST_CASE("cli synth determinism and k = 1 mode") {
    TempDir dir;
    SECTION("same seed gives byte-identical corpora") {
        const std::string cfgA = smoke_config(dir, "runB");
        const std::string cfgB = smoke_config(dir, "runC");
        REQUIRE(cli::run({"synth", "--config", cfgA}) == 0);
        REQUIRE(cli::run({"synth", "--config", cfgB}) == 0);
        REQUIRE(slurp((dir.path() / "runB/data/cat0.train.txt").string()) ==
                slurp((dir.path() / "runC/data/cat0.train.txt").string()));
        REQUIRE(slurp((dir.path() / "runB/data/cat1.test.txt").string()) ==
                slurp((dir.path() / "runC/data/cat1.test.txt").string()));
        REQUIRE(!slurp((dir.path() / "runB/data/cat0.train.txt").string()).empty());
    }
    SECTION("k = 1 writes a single corpus file") {
        const std::string cfg = smoke_config(dir, "runD");
        REQUIRE(cli::run({"synth", "--config", cfg, "--set", "k=1"}) == 0);
        REQUIRE(std::filesystem::exists(dir.path() / "runD/data/cat0.train.txt"));
        REQUIRE(!std::filesystem::exists(dir.path() / "runD/data/cat1.train.txt"));
    }
}

TEST_CASE("cli usage and config errors exit with code 1") {
    TempDir dir;
    const std::string cfg = smoke_config(dir, "runE");
    REQUIRE(cli::run({"synth", "--config", cfg, "--set", "nonsense_key=1"}) == 1);
    REQUIRE(cli::run({"synth", "--config", cfg, "--set", "tau_tar=0.2"}) == 1);
    REQUIRE(cli::run({"synth", "--config", dir.file("missing.cfg")}) == 1);
    REQUIRE(cli::run({"no_such_command"}) == 1);
    REQUIRE(cli::run({"train", "--config", cfg, "--set",
                      "run_dir=" + dir.file("fresh_run")}) == 2);  // missing pretrain ckpt
}

TEST_CASE("cli ablation flags shape the training log") {
    TempDir dir;
    const std::string cfg = smoke_config(dir, "runF");
    REQUIRE(cli::run({"synth", "--config", cfg}) == 0);
    REQUIRE(cli::run({"pretrain", "--config", cfg}) == 0);
    REQUIRE(cli::run({"train", "--config", cfg, "--set", "no_t=true"}) == 0);
    std::ifstream in((dir.path() / "runF/metrics.jsonl").string());
    std::string line;
    int data_rounds = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        if (j["round"].get<int>() >= 1) {
            REQUIRE(j["temp_offset_chosen"].get<int>() == 0);
            ++data_rounds;
        }
    }
    REQUIRE(data_rounds == 2);
}

TEST_CASE("cli real-mode eval omits the oracle metric") {
    TempDir dir;
    // two tiny category corpora
    const std::string c0 = dir.write("real/cat0.txt",
                                     "good fine great\nnice good\ngreat nice fine good\n"
                                     "fine fine\ngood great\nnice nice good\n");
    const std::string c1 = dir.write("real/cat1.txt",
                                     "bad poor awful\nsad bad\nawful sad poor bad\n"
                                     "poor poor\nbad awful\nsad sad bad\n");
    std::ostringstream os;
    os << "mode = real\nk = 2\nT = 5\nseed = 3\n"
       << "corpus_files = " << c0 << "," << c1 << "\n"
       << "test_files = " << c0 << "," << c1 << "\n"
       << "pretrain_epochs = 1\nbatch_size = 6\nrounds = 1\nd_steps = 1\neval_n = 4\n"
       << "metric_samples = 8\neval_samples = 8\n"
       << "g_d_emb = 4\ng_d_cat = 2\ng_d_mem = 8\ng_heads = 2\ng_slots = 1\ng_d_mlp = 8\n"
       << "d_emb = 4\nd_filters = 4\nd_hidden = 8\nd_windows = 2,3\n"
       << "run_dir = " << (dir.path() / "runReal").string() << "\n";
    const std::string cfg = dir.write("real.cfg", os.str());

    REQUIRE(cli::run({"pretrain", "--config", cfg}) == 0);
    REQUIRE(cli::run({"eval", "--config", cfg}) == 0);
    auto report = nlohmann::json::parse(slurp((dir.path() / "runReal/eval_report.json").string()));
    REQUIRE(!report["per_category"].contains("nll_oracle"));
    REQUIRE(report["per_category"].contains("nll_gen"));
    REQUIRE(report["per_category"].contains("bleu-2"));
}

TEST_CASE("cli plot skips corrupt lines with a warning count") {
    TempDir dir;
    std::ostringstream os;
    os << MetricRecord{0, 1.0, "none", 0, 0.5, 0.5, 2.0, 20.0, std::nullopt, std::nullopt}
              .to_json()
              .dump()
       << "\n";
    os << "this line is garbage {{{\n";
    os << MetricRecord{1, 1.0, "CatRa", 0, 0.5, 0.5, 2.0, 19.0, std::nullopt, std::nullopt}
              .to_json()
              .dump()
       << "\n";
    const std::string log = dir.write("m.jsonl", os.str());
    REQUIRE(cli::run({"plot", "--log", log, "--out-dir", dir.file("plots")}) == 0);
    REQUIRE(std::filesystem::exists(dir.file("plots") + "/nll_oracle.png"));
}
