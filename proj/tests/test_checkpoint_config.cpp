#include "catgan/checkpoint.hpp"
#include "catgan/config.hpp"

#include "helpers/temp_dir.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace catgan;
using catgan_tests::TempDir;

TEST_CASE("named-array container round trip") {
    TempDir dir;
    NamedArrays arrays;
    arrays.meta = {{"kind", "test"}, {"note", 42}};
    Rng rng(5);
    ad::Mat a(3, 4), b(1, 7);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = rng.normal();
    for (int j = 0; j < 7; ++j) b(0, j) = rng.normal();
    arrays.add("alpha", a);
    arrays.add("beta", b);

    const std::string path = dir.file("t.ckpt");
    save_named_arrays(path, arrays);
    NamedArrays loaded = load_named_arrays(path);
    REQUIRE(loaded.meta["kind"] == "test");
    REQUIRE(loaded.meta["note"] == 42);
    REQUIRE(loaded.items.size() == 2);
    REQUIRE(loaded.items[0].first == "alpha");
    // stored as 32-bit floats
    REQUIRE(loaded.get("alpha").isApprox(a, 1e-6));
    REQUIRE(loaded.get("beta").isApprox(b, 1e-6));
    REQUIRE_THROWS(loaded.get("gamma"));
}

TEST_CASE("corrupt checkpoint files are rejected") {
    TempDir dir;
    const std::string path = dir.write("bad.ckpt", "definitely not a checkpoint");
    REQUIRE_THROWS_WITH(load_named_arrays(path),
                        Catch::Matchers::ContainsSubstring("not a checkpoint"));
    REQUIRE_THROWS(load_named_arrays(dir.file("missing.ckpt")));
}

TEST_CASE("generator checkpoint round trip preserves behavior") {
    TempDir dir;
    GeneratorConfig cfg;
    cfg.vocab_size = 6;
    cfg.categories = 2;
    cfg.bos_id = 1;
    cfg.d_emb = 4;
    cfg.d_cat = 2;
    cfg.d_mem = 8;
    cfg.heads = 2;
    cfg.slots = 2;
    cfg.d_mlp = 8;
    GeneratorParams p = GeneratorParams::init(cfg, 17);
    AdamState opt;
    opt.step = 12;
    opt.moments["e_y"] = {ad::Mat::Ones(6, 4), ad::Mat::Ones(6, 4) * 0.5};

    const std::string path = dir.file("gen.ckpt");
    save_generator(path, p, {{"vocab_hash", 123u}, {"T", 9}}, &opt);

    AdamState opt2;
    nlohmann::json extra;
    GeneratorParams q = load_generator(path, &opt2, &extra);
    REQUIRE(q.cfg.vocab_size == 6);
    REQUIRE(q.cfg.slots == 2);
    REQUIRE(extra["vocab_hash"] == 123u);
    REQUIRE(extra["T"] == 9);
    REQUIRE(opt2.step == 12);
    REQUIRE(opt2.moments.at("e_y").first.isApprox(ad::Mat::Ones(6, 4)));

    // two loads of one file behave identically
    GeneratorParams r = load_generator(path);
    Eigen::MatrixXi sq = sample_hard(q, {0, 1}, 5, 3);
    Eigen::MatrixXi sr = sample_hard(r, {0, 1}, 5, 3);
    REQUIRE((sq.array() == sr.array()).all());

    REQUIRE_THROWS_WITH(load_discriminator(path),
                        Catch::Matchers::ContainsSubstring("not a discriminator"));
}

TEST_CASE("discriminator checkpoint round trip") {
    TempDir dir;
    DiscriminatorConfig cfg;
    cfg.vocab_size = 6;
    cfg.d_emb = 4;
    cfg.window_sizes = {2, 3};
    cfg.filters_per_size = 4;
    cfg.d_hidden = 8;
    DiscriminatorParams p = DiscriminatorParams::init(cfg, 19);
    const std::string path = dir.file("disc.ckpt");
    save_discriminator(path, p);
    DiscriminatorParams q = load_discriminator(path);
    REQUIRE(q.cfg.window_sizes == std::vector<int>{2, 3});

    Tape t(false);
    Eigen::MatrixXi ids(2, 4);
    ids << 0, 1, 2, 3, 5, 4, 3, 2;
    auto lp = discriminate_hard(t, DiscriminatorVars::lift(t, p, false), ids).value();
    auto lq = discriminate_hard(t, DiscriminatorVars::lift(t, q, false), ids).value();
    REQUIRE(lp.isApprox(lq, 1e-6));
}

TEST_CASE("oracle checkpoint round trip keeps sampling and scoring fixed") {
    TempDir dir;
    OracleModel m(2, 8, 6, 23, 1);
    const std::string path = dir.file("oracle.ckpt");
    save_oracle(path, m);
    OracleModel a = load_oracle(path);
    OracleModel b = load_oracle(path);
    REQUIRE(a.k() == 2);
    REQUIRE(a.start_id() == 1);
    LabeledDataset sa = a.sample(0, 6, 5, 9), sb = b.sample(0, 6, 5, 9);
    for (std::size_t i = 0; i < sa.size(); ++i) REQUIRE(sa.sequences[i].ids == sb.sequences[i].ids);
    auto na = a.nll(sa.sequences, sa.labels), nb = b.nll(sb.sequences, sb.labels);
    REQUIRE(na.per_category[0] == nb.per_category[0]);
}

TEST_CASE("config parsing") {
    TempDir dir;
    SECTION("keys, comments and overrides") {
        auto path = dir.write("a.cfg",
                              "# comment\n"
                              "mode = synthetic\n"
                              "k = 2   # trailing comment\n"
                              "tau_tar = 100\n"
                              "no_t = true\n"
                              "\n");
        ExperimentConfig cfg = load_config(path);
        REQUIRE(cfg.mode == "synthetic");
        REQUIRE(cfg.k == 2);
        REQUIRE(cfg.tau_tar == 100.0);
        REQUIRE(cfg.no_t);
        config_set(cfg, "k", "3");
        REQUIRE(cfg.k == 3);
    }
    SECTION("unknown keys are rejected") {
        auto path = dir.write("b.cfg", "definitely_not_a_key = 1\n");
        REQUIRE_THROWS_WITH(load_config(path),
                            Catch::Matchers::ContainsSubstring("unknown config key"));
    }
    SECTION("malformed lines and values are rejected") {
        REQUIRE_THROWS(load_config(dir.write("c.cfg", "just some words\n")));
        REQUIRE_THROWS(load_config(dir.write("d.cfg", "k = banana\n")));
        REQUIRE_THROWS(load_config(dir.write("e.cfg", "no_h = maybe\n")));
    }
    SECTION("validation enforces the documented constraints") {
        ExperimentConfig cfg;
        cfg.mode = "synthetic";
        config_validate(cfg);  // defaults pass
        auto expect_fail = [](ExperimentConfig c) { REQUIRE_THROWS(config_validate(c)); };
        {
            ExperimentConfig c = cfg;
            c.k = 0;
            expect_fail(c);
        }
        {
            ExperimentConfig c = cfg;
            c.tau_tar = 0.5;
            expect_fail(c);
        }
        {
            ExperimentConfig c = cfg;
            c.lambda = -0.1;
            expect_fail(c);
        }
        {
            ExperimentConfig c = cfg;
            c.rounds = 0;
            expect_fail(c);
        }
        {
            ExperimentConfig c = cfg;
            c.mode = "imaginary";
            expect_fail(c);
        }
        {
            ExperimentConfig c = cfg;
            c.mode = "real";
            expect_fail(c);  // real mode needs corpus_files
        }
    }
    SECTION("dump and reload is a fixpoint") {
        ExperimentConfig cfg;
        cfg.k = 4;
        cfg.tau_tar = 7.5;
        cfg.d_windows = "2,4";
        auto path = dir.write("f.cfg", dump_config(cfg));
        ExperimentConfig back = load_config(path);
        REQUIRE(dump_config(back) == dump_config(cfg));
    }
}
