#include "catgan/objectives.hpp"

#include "catgan/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace catgan;

namespace {

double sigma(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LogitBatchPair random_pair(Rng& rng, int n_real, int n_fake) {
    LogitBatchPair p;
    for (int i = 0; i < n_real; ++i) p.real.push_back(2.0 * rng.normal());
    for (int i = 0; i < n_fake; ++i) p.fake.push_back(2.0 * rng.normal());
    return p;
}

} // namespace

TEST_CASE("relativistic_score") {
    SECTION("sigmoid of difference against the opposite mean") {
        LogitBatchPair p{{0.0}, {0.0}};
        REQUIRE(relativistic_score(p, Side::Real)[0] == Catch::Approx(0.5));
        LogitBatchPair q{{2.0}, {0.0}};
        REQUIRE(relativistic_score(q, Side::Real)[0] == Catch::Approx(0.880797).margin(1e-6));
    }
    SECTION("shift invariance") {
        Rng rng(4);
        LogitBatchPair p = random_pair(rng, 5, 5);
        auto base_r = relativistic_score(p, Side::Real);
        auto base_f = relativistic_score(p, Side::Fake);
        LogitBatchPair q = p;
        for (double& v : q.real) v += 7.25;
        for (double& v : q.fake) v += 7.25;
        auto shifted_r = relativistic_score(q, Side::Real);
        auto shifted_f = relativistic_score(q, Side::Fake);
        for (std::size_t i = 0; i < base_r.size(); ++i)
            REQUIRE(shifted_r[i] == Catch::Approx(base_r[i]).margin(1e-9));
        for (std::size_t i = 0; i < base_f.size(); ++i)
            REQUIRE(shifted_f[i] == Catch::Approx(base_f[i]).margin(1e-9));
    }
    SECTION("empty batch is an error") {
        REQUIRE_THROWS(relativistic_score(LogitBatchPair{{}, {1.0}}, Side::Real));
    }
}

TEST_CASE("loss_ra") {
    SECTION("symmetric point gives 2 ln 2") {
        LogitBatchPair p{{0.7, 0.7}, {0.7, 0.7}};
        REQUIRE(loss_ra(p) == Catch::Approx(2.0 * std::log(2.0)).margin(1e-9));
    }
    SECTION("saturated separation drives the loss to zero") {
        LogitBatchPair p{{20.0, 20.0}, {0.0, 0.0}};
        REQUIRE(loss_ra(p) == Catch::Approx(0.0).margin(1e-6));
    }
    SECTION("worked scalar example") {
        LogitBatchPair p{{1.0, 3.0}, {0.0, 0.0}};
        // mean fake = 0, mean real = 2
        const double expect = -(std::log(sigma(1.0)) + std::log(sigma(3.0))) / 2.0 -
                              (std::log(sigma(2.0)) + std::log(sigma(2.0))) / 2.0;
        REQUIRE(loss_ra(p) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("d_loss_catra composition") {
    SECTION("k = 1 with the category pair equal to the all pair doubles loss_ra") {
        Rng rng(9);
        LogitBatchPair p = random_pair(rng, 6, 6);
        REQUIRE(d_loss_catra({p}, p, 1) == Catch::Approx(2.0 * loss_ra(p)).margin(1e-12));
    }
    SECTION("all-equal logits with k = 2 give 6 ln 2") {
        LogitBatchPair p{{1.0, 1.0}, {1.0, 1.0}};
        REQUIRE(d_loss_catra({p, p}, p, 2) == Catch::Approx(6.0 * std::log(2.0)).margin(1e-9));
    }
    SECTION("matches the sum of independently computed loss_ra values") {
        Rng rng(10);
        LogitBatchPair a = random_pair(rng, 4, 4);
        LogitBatchPair b = random_pair(rng, 4, 4);
        LogitBatchPair all = random_pair(rng, 8, 8);
        const double expect = loss_ra(a) + loss_ra(b) + loss_ra(all);
        REQUIRE(d_loss_catra({a, b}, all, 2) == Catch::Approx(expect).margin(1e-9));
    }
    SECTION("k mismatch is an error") {
        Rng rng(11);
        LogitBatchPair p = random_pair(rng, 2, 2);
        REQUIRE_THROWS(d_loss_catra({p}, p, 2));
    }
}

TEST_CASE("g_loss_catra is exactly the negation") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        LogitBatchPair a = random_pair(rng, 5, 5);
        LogitBatchPair b = random_pair(rng, 5, 5);
        LogitBatchPair all = random_pair(rng, 10, 10);
        REQUIRE(g_loss_catra({a, b}, all, 2) == -d_loss_catra({a, b}, all, 2));
    }
    LogitBatchPair p{{0.0, 0.0}, {0.0, 0.0}};
    REQUIRE(g_loss_catra({p, p}, p, 2) == Catch::Approx(-6.0 * std::log(2.0)).margin(1e-9));
    LogitBatchPair sat{{20.0, 20.0}, {0.0, 0.0}};
    const double g = g_loss_catra({sat}, sat, 1);
    REQUIRE(g <= 0.0);
    REQUIRE(g == Catch::Approx(0.0).margin(1e-5));
}

TEST_CASE("g_loss_catrs") {
    SECTION("all pairwise-equal logits with k = 2 give 3 ln 2") {
        LogitBatchPair p{{0.4, -1.2}, {0.4, -1.2}};
        REQUIRE(g_loss_catrs({p, p}, p) == Catch::Approx(3.0 * std::log(2.0)).margin(1e-9));
    }
    SECTION("fake dominating real by +20 saturates to zero") {
        LogitBatchPair p{{0.0, 0.0}, {20.0, 20.0}};
        REQUIRE(g_loss_catrs({p}, p) == Catch::Approx(0.0).margin(1e-6));
    }
    SECTION("k = 1 scalar example") {
        LogitBatchPair p{{0.0}, {1.0}};
        REQUIRE(g_loss_catrs({p}, p) == Catch::Approx(-2.0 * std::log(sigma(1.0))).margin(1e-12));
    }
    SECTION("length mismatch is an error") {
        LogitBatchPair p{{0.0, 1.0}, {1.0}};
        REQUIRE_THROWS(g_loss_catrs({p}, p));
    }
}

TEST_CASE("objective properties") {
    Rng rng(13);
    SECTION("shift invariance of all losses") {
        for (int trial = 0; trial < 25; ++trial) {
            LogitBatchPair a = random_pair(rng, 4, 4);
            LogitBatchPair b = random_pair(rng, 4, 4);
            LogitBatchPair all = random_pair(rng, 8, 8);
            const double shift = 10.0 * rng.normal();
            auto shifted = [&](LogitBatchPair p) {
                for (double& v : p.real) v += shift;
                for (double& v : p.fake) v += shift;
                return p;
            };
            LogitBatchPair sa = shifted(a), sb = shifted(b), sall = shifted(all);
            REQUIRE(d_loss_catra({sa, sb}, sall, 2) ==
                    Catch::Approx(d_loss_catra({a, b}, all, 2)).margin(1e-9));
            REQUIRE(g_loss_catrs({sa, sb}, sall) ==
                    Catch::Approx(g_loss_catrs({a, b}, all)).margin(1e-9));
            REQUIRE(loss_ra(sa) == Catch::Approx(loss_ra(a)).margin(1e-9));
        }
    }
    SECTION("raising one fake logit strictly decreases both generator losses") {
        LogitBatchPair a = random_pair(rng, 4, 4);
        LogitBatchPair b = random_pair(rng, 4, 4);
        LogitBatchPair all = random_pair(rng, 8, 8);
        const double g0 = g_loss_catra({a, b}, all, 2);
        const double s0 = g_loss_catrs({a, b}, all);
        a.fake[2] += 0.5;
        REQUIRE(g_loss_catra({a, b}, all, 2) < g0);
        REQUIRE(g_loss_catrs({a, b}, all) < s0);
    }
    SECTION("losses stay finite under extreme separation") {
        LogitBatchPair p{{1000.0}, {-1000.0}};
        REQUIRE(std::isfinite(loss_ra(p)));
        REQUIRE(std::isfinite(d_loss_catra({p}, p, 1)));
        REQUIRE(std::isfinite(g_loss_catrs({p}, p)));
        LogitBatchPair q{{-1000.0}, {1000.0}};
        REQUIRE(std::isfinite(loss_ra(q)));
        REQUIRE(std::isfinite(g_loss_catrs({q}, q)));
    }
}
