#include "catgan/metrics.hpp"

#include "helpers/bleu_reference.hpp"
#include "helpers/enumeration.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace catgan;

namespace {

GeneratorParams tiny_generator(int V, int k, std::uint64_t seed) {
    GeneratorConfig c;
    c.vocab_size = V;
    c.categories = k;
    c.bos_id = 1;
    c.d_emb = 3;
    c.d_cat = 2;
    c.d_mem = 4;
    c.heads = 1;
    c.slots = 1;
    c.d_mlp = 4;
    c.init_scale = 0.4;
    return GeneratorParams::init(c, seed);
}

GeneratorParams uniform_generator(int V, int k, std::uint64_t seed) {
    GeneratorParams p = tiny_generator(V, k, seed);
    p.w_out.setZero();
    p.b_out.setZero();
    return p;
}

GeneratorParams collapsed_generator(int V, int k, int token, std::uint64_t seed) {
    GeneratorParams p = tiny_generator(V, k, seed);
    p.w_out.setZero();
    p.b_out.setZero();
    p.b_out(0, token) = 60.0;
    return p;
}

} // namespace

TEST_CASE("harmonic_mean") {
    REQUIRE(harmonic_mean({0.5, 0.5}) == 0.5);
    REQUIRE(harmonic_mean({0.4, 0.6}) == Catch::Approx(0.48).margin(1e-15));
    REQUIRE(harmonic_mean({1.0, 0.0}) == 0.0);
    REQUIRE_THROWS(harmonic_mean({}));
    REQUIRE_THROWS(harmonic_mean({0.5, -0.1}));

    SECTION("never exceeds the arithmetic mean") {
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> vals;
            const int n = 1 + static_cast<int>(rng.below(6));
            double arith = 0.0;
            for (int i = 0; i < n; ++i) {
                vals.push_back(0.01 + rng.uniform01());
                arith += vals.back();
            }
            arith /= n;
            REQUIRE(harmonic_mean(vals) <= arith + 1e-12);
        }
        REQUIRE(harmonic_mean({0.7, 0.7, 0.7}) == Catch::Approx(0.7).margin(1e-12));
    }
}

TEST_CASE("bleu_n basics") {
    const Sentence ref1{1, 2, 3, 4, 5};
    const Sentence ref2{2, 2, 4};
    SECTION("candidate equal to a reference scores 1") {
        REQUIRE(bleu_n({ref1}, {ref1, ref2}, 3) == Catch::Approx(1.0));
    }
    SECTION("disjoint unigrams score 0") {
        REQUIRE(bleu_n({{7, 8, 9, 7}}, {ref1, ref2}, 2) == 0.0);
    }
    SECTION("empty candidate contributes 0") {
        REQUIRE(bleu_n({Sentence{}, ref1}, {ref1}, 2) == Catch::Approx(0.5));
    }
    SECTION("non-increasing in n") {
        const Sentence cand{1, 2, 3, 9, 5};
        double prev = 1.0;
        for (int n = 2; n <= 5; ++n) {
            const double b = bleu_n({cand}, {ref1, ref2}, n);
            REQUIRE(b <= prev + 1e-12);
            prev = b;
        }
    }
    SECTION("order below 2 or empty references are errors") {
        REQUIRE_THROWS(bleu_n({ref1}, {ref1}, 1));
        REQUIRE_THROWS(bleu_n({ref1}, {}, 2));
        REQUIRE_THROWS(bleu_n({}, {ref1}, 2));
    }
}

TEST_CASE("bleu_n matches an independent brute-force implementation on random pairs") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_refs = 1 + static_cast<int>(rng.below(4));
        std::vector<Sentence> refs;
        for (int r = 0; r < n_refs; ++r) {
            Sentence s;
            const int len = 1 + static_cast<int>(rng.below(10));
            for (int i = 0; i < len; ++i) s.push_back(static_cast<int>(rng.below(5)));
            refs.push_back(s);
        }
        std::vector<Sentence> cands;
        const int n_cands = 1 + static_cast<int>(rng.below(3));
        for (int c = 0; c < n_cands; ++c) {
            Sentence s;
            const int len = 1 + static_cast<int>(rng.below(10));
            for (int i = 0; i < len; ++i) s.push_back(static_cast<int>(rng.below(5)));
            cands.push_back(s);
        }
        for (int order = 2; order <= 4; ++order) {
            const double ours = bleu_n(cands, refs, order);
            const double ref = catgan_tests::reference_bleu(cands, refs, order);
            INFO("trial " << trial << " order " << order);
            REQUIRE(ours == Catch::Approx(ref).margin(1e-12));
        }
    }
}

TEST_CASE("nll_div analytic cases") {
    SECTION("total collapse gives 0") {
        GeneratorParams p = collapsed_generator(5, 1, 3, 1);
        REQUIRE(nll_div(p, 0, 200, 4, 9) == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("uniform generator gives T ln V") {
        GeneratorParams p = uniform_generator(8, 1, 2);
        REQUIRE(nll_div(p, 0, 500, 4, 10) == Catch::Approx(4.0 * std::log(8.0)).margin(1e-9));
    }
    SECTION("matches exact entropy from enumeration within 1% (V = 4, T = 3)") {
        GeneratorParams p = tiny_generator(4, 1, 3);
        auto probs = catgan_tests::generator_exact_distribution(p, 0, 3);
        double entropy = 0.0;
        for (double q : probs)
            if (q > 0) entropy -= q * std::log(q);
        const double mc = nll_div(p, 0, 50000, 3, 11);
        REQUIRE(mc == Catch::Approx(entropy).epsilon(0.01));
    }
}

TEST_CASE("nll_gen analytic cases") {
    SECTION("memorized single-sequence test set gives ~0") {
        GeneratorParams p = collapsed_generator(5, 1, 2, 4);
        LabeledDataset test;
        test.k = 1;
        test.T = 4;
        test.sequences.push_back(TokenSequence{{2, 2, 2, 2}, 4});
        test.labels.push_back(0);
        REQUIRE(nll_gen(p, test) == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("uniform generator gives T ln V for any test set") {
        GeneratorParams p = uniform_generator(8, 2, 5);
        LabeledDataset test;
        test.k = 2;
        test.T = 4;
        Rng rng(6);
        for (int i = 0; i < 10; ++i) {
            TokenSequence s;
            for (int t = 0; t < 4; ++t) s.ids.push_back(static_cast<int>(rng.below(8)));
            s.effective_length = 4;
            test.sequences.push_back(s);
            test.labels.push_back(i % 2);
        }
        REQUIRE(nll_gen(p, test) == Catch::Approx(4.0 * std::log(8.0)).margin(1e-9));

        SECTION("invariant to test-set ordering") {
            GeneratorParams q = tiny_generator(8, 2, 7);
            const double before = nll_gen(q, test);
            std::reverse(test.sequences.begin(), test.sequences.end());
            std::reverse(test.labels.begin(), test.labels.end());
            REQUIRE(nll_gen(q, test) == Catch::Approx(before).margin(1e-9));
        }
    }
    SECTION("label outside the generator's categories is an error") {
        GeneratorParams p = uniform_generator(8, 1, 5);
        LabeledDataset test;
        test.k = 2;
        test.T = 2;
        test.sequences.push_back(TokenSequence{{0, 1}, 2});
        test.labels.push_back(1);
        REQUIRE_THROWS(nll_gen(p, test));
    }
}

TEST_CASE("nll_oracle_metric") {
    SECTION("uniform generator against a uniform oracle gives T ln V") {
        GeneratorParams p = uniform_generator(8, 1, 6);
        OracleModel oracle(1, 8, 4, 12);
        for (auto& cp : oracle.mutable_categories()) {
            cp.w_out.setZero();
            cp.b_out.setZero();
        }
        REQUIRE(nll_oracle_metric(oracle, p, 0, 400, 4, 13) ==
                Catch::Approx(4.0 * std::log(8.0)).margin(1e-9));
    }
    SECTION("matches the enumerated cross-entropy within 1% (V = 4, T = 3)") {
        GeneratorParams p = tiny_generator(4, 1, 8);
        OracleModel oracle(1, 4, 6, 14);
        double cross = 0.0;
        catgan_tests::for_each_sequence(4, 3, [&](const std::vector<int>& seq) {
            const double pg = std::exp(sequence_log_prob(p, seq, 0));
            const double po = catgan_tests::oracle_chain_probability(oracle, 0, seq);
            cross -= pg * std::log(po);
        });
        const double mc = nll_oracle_metric(oracle, p, 0, 50000, 3, 15);
        REQUIRE(mc == Catch::Approx(cross).epsilon(0.01));
    }
    SECTION("vocabulary mismatch is an error") {
        GeneratorParams p = uniform_generator(8, 1, 6);
        OracleModel oracle(1, 9, 4, 12);
        REQUIRE_THROWS(nll_oracle_metric(oracle, p, 0, 10, 3, 1));
    }
}

TEST_CASE("metrics are seed-deterministic") {
    GeneratorParams p = tiny_generator(6, 2, 9);
    REQUIRE(nll_div(p, 1, 300, 4, 42) == nll_div(p, 1, 300, 4, 42));
    OracleModel oracle(2, 6, 4, 16);
    REQUIRE(nll_oracle_metric(oracle, p, 0, 300, 4, 42) ==
            nll_oracle_metric(oracle, p, 0, 300, 4, 42));
}

TEST_CASE("MetricsReport aggregates and serializes") {
    MetricsReport r;
    r.categories = 2;
    r.round = 7;
    r.samples_per_category = 100;
    r.set("nll_div", {0.4, 0.6});
    r.set("bleu-2", {0.5, 0.5});
    REQUIRE(r.harmonic["nll_div"] == Catch::Approx(0.48).margin(1e-15));
    REQUIRE(r.harmonic["bleu-2"] == 0.5);

    nlohmann::json j = r.to_json();
    REQUIRE(j["per_category"]["nll_div"].size() == 2);
    // harmonic fields recompute from the per-category fields exactly
    for (const auto& [name, vals] : r.per_category)
        REQUIRE(harmonic_mean(vals) == r.harmonic.at(name));

    const std::string table = r.to_table();
    REQUIRE(table.find("nll_div") != std::string::npos);
    REQUIRE(table.find("harmonic") != std::string::npos);
}
