#ifndef CATGAN_EVOLUTION_HPP
#define CATGAN_EVOLUTION_HPP

#include "catgan/adam.hpp"
#include "catgan/corpus.hpp"
#include "catgan/discriminator.hpp"
#include "catgan/generator.hpp"
#include "catgan/metrics.hpp"
#include "catgan/objectives.hpp"
#include "catgan/oracle.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

enum class Objective { CatRS, CatRa };

inline const char* objective_name(Objective o) {
    return o == Objective::CatRS ? "CatRS" : "CatRa";
}

// One mutation direction: a temperature change (index into {-1, 0, +1}, i.e.
// f(n-1), f(n), f(n+1)) combined with a training objective.
struct MutationDirection {
    int temp_offset = 0;       // -1, 0 or +1
    Objective objective = Objective::CatRa;
};

// tau = tau_tar^(n/N), non-decreasing for tau_tar >= 1, clamped to [0, N].
struct TemperatureSchedule {
    double tau_tar = 1.0;
    int max_iters = 1;  // N

    TemperatureSchedule() = default;
    TemperatureSchedule(double tar, int n) : tau_tar(tar), max_iters(n) {
        if (!(tau_tar >= 1.0)) throw std::invalid_argument("schedule: tau_tar must be >= 1");
        if (max_iters < 1) throw std::invalid_argument("schedule: N must be >= 1");
    }

    double at(int n, int offset = 0) const {
        int pos = n + offset;
        if (pos < 0) pos = 0;
        if (pos > max_iters) pos = max_iters;
        return std::pow(tau_tar, static_cast<double>(pos) / static_cast<double>(max_iters));
    }
};

// One generator candidate: an independent parameter copy, the mutation
// direction that produced it, and its two fitness scores once evaluated.
struct Individual {
    GeneratorParams params;
    AdamState opt;
    MutationDirection direction;
    double f_temp = std::numeric_limits<double>::quiet_NaN();
    double f_obj = std::numeric_limits<double>::quiet_NaN();
    bool valid = true;
};

// ---- MLE pretraining ----

// Teacher-forced cross-entropy with category conditioning. Returns the
// per-epoch mean NLL (nats per sequence, summed over the T steps).
inline std::vector<double> mle_pretrain(GeneratorParams& params, AdamState& opt,
                                        const LabeledDataset& data, int epochs, double lr,
                                        int batch_size, std::uint64_t seed) {
    if (data.size() == 0) throw std::invalid_argument("mle_pretrain: empty dataset");
    if (epochs < 0) throw std::invalid_argument("mle_pretrain: negative epoch count");
    std::vector<double> trajectory;
    if (epochs == 0) return trajectory;

    const int bs = std::min<int>(batch_size, static_cast<int>(data.size()));
    BatchIter iter(data, bs, /*per_category=*/false, derive_seed(seed, 0x91eULL));
    const int batches_per_epoch = std::max<int>(1, static_cast<int>(data.size()) / bs);
    for (int e = 0; e < epochs; ++e) {
        double epoch_nll = 0.0;
        for (int b = 0; b < batches_per_epoch; ++b) {
            Batch batch = iter.next();
            Tape tape;
            GeneratorVars g = GeneratorVars::lift(tape, params, true);
            Var lp = sequence_log_prob(tape, g, batch.ids, batch.labels);
            Var loss = ad::neg(ad::mean_all(lp));
            ad::backward(loss);
            auto grads = collect_grads(g);
            adam_step(params, grads, opt, lr);
            epoch_nll += loss.value()(0, 0);
        }
        trajectory.push_back(epoch_nll / batches_per_epoch);
    }
    return trajectory;
}

// ---- adversarial machinery ----

struct TrainSettings {
    int rounds = 50;                // N, also the temperature schedule length
    double tau_tar = 1.0;
    double lambda = 0.001;
    int gen_steps = 1;              // optimizer steps per child per round
    int d_steps = 5;                // discriminator updates per round
    int batch_size = 64;            // per-category batch for both players
    int eval_n = 64;                // generated samples per fitness evaluation
    double lr_gen = 1e-2;
    double lr_disc = 1e-2;
    int log_every = 1;
    int checkpoint_every = 1;
    bool no_h = false;              // single child, no selection
    bool no_t = false;              // temperature offsets pinned to 0
    bool no_o = false;              // objectives pinned to CatRa
    bool persistent_offsets = false;  // selected offset shifts the schedule position
    int metric_samples = 256;       // per category, for logged NLL metrics
    std::uint64_t seed = 1;
};

// One line of the metrics log.
struct MetricRecord {
    int round = 0;
    double tau = 1.0;
    std::string objective_chosen;
    int temp_offset_chosen = 0;
    double f_temp = 0.0;
    double f_obj = 0.0;
    double nll_div = 0.0;
    std::optional<double> nll_oracle;
    std::optional<double> nll_gen;
    std::optional<double> bleu;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["round"] = round;
        j["tau"] = tau;
        j["objective_chosen"] = objective_chosen;
        j["temp_offset_chosen"] = temp_offset_chosen;
        j["f_temp"] = f_temp;
        j["f_obj"] = f_obj;
        j["nll_div"] = nll_div;
        if (nll_oracle) j["nll_oracle"] = *nll_oracle;
        if (nll_gen) j["nll_gen"] = *nll_gen;
        if (bleu) j["bleu"] = *bleu;
        return j;
    }

    static MetricRecord from_json(const nlohmann::json& j) {
        MetricRecord r;
        r.round = j.at("round").get<int>();
        r.tau = j.at("tau").get<double>();
        r.objective_chosen = j.at("objective_chosen").get<std::string>();
        r.temp_offset_chosen = j.at("temp_offset_chosen").get<int>();
        r.f_temp = j.at("f_temp").get<double>();
        r.f_obj = j.at("f_obj").get<double>();
        r.nll_div = j.at("nll_div").get<double>();
        if (j.contains("nll_oracle")) r.nll_oracle = j["nll_oracle"].get<double>();
        if (j.contains("nll_gen")) r.nll_gen = j["nll_gen"].get<double>();
        if (j.contains("bleu")) r.bleu = j["bleu"].get<double>();
        return r;
    }
};

// Per-round fitness table, for audit of the two-stage selection.
struct ChildFitness {
    int temp_offset = 0;
    std::string objective;
    bool valid = true;
    double f_temp = 0.0;
    double f_obj = 0.0;
    bool stage_temp_winner = false;
    bool survivor = false;
};

struct SelectionRecord {
    int round = 0;
    std::vector<ChildFitness> children;

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : children)
            arr.push_back({{"temp_offset", c.temp_offset},
                           {"objective", c.objective},
                           {"valid", c.valid},
                           {"f_temp", c.f_temp},
                           {"f_obj", c.f_obj},
                           {"stage_temp_winner", c.stage_temp_winner},
                           {"survivor", c.survivor}});
        return {{"round", round}, {"children", arr}};
    }
};

namespace detail {

// Pooled seeded draw of n dataset rows (with replacement only when the
// dataset is smaller than n).
inline Eigen::MatrixXi draw_rows(const LabeledDataset& ds, int n, std::uint64_t seed,
                                 std::vector<int>* labels_out = nullptr) {
    Rng rng(seed);
    Eigen::MatrixXi out(n, ds.T);
    if (labels_out) labels_out->clear();
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (ds.size() >= static_cast<std::size_t>(n))
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
    for (int i = 0; i < n; ++i) {
        const std::size_t idx = ds.size() >= static_cast<std::size_t>(n)
            ? order[static_cast<std::size_t>(i)]
            : order[rng.below(order.size())];
        for (int t = 0; t < ds.T; ++t) out(i, t) = ds.sequences[idx].ids[static_cast<std::size_t>(t)];
        if (labels_out) labels_out->push_back(ds.labels[idx]);
    }
    return out;
}

inline Eigen::MatrixXi category_rows(const LabeledDataset& ds, int c, int n, std::uint64_t seed) {
    auto idx = draw_category_indices(ds, c, n, seed);
    Eigen::MatrixXi out(n, ds.T);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < ds.T; ++t)
            out(i, t) = ds.sequences[idx[static_cast<std::size_t>(i)]].ids[static_cast<std::size_t>(t)];
    return out;
}

} // namespace detail

// One optimizer step of `child` on its direction's objective against a frozen
// discriminator: per-category real batches vs fakes generated at the
// direction's temperature, plus the pooled all-category term.
inline bool variation_step(Individual& child, const DiscriminatorParams& disc,
                           const LabeledDataset& data, double tau, int batch_size,
                           double lr, std::uint64_t step_seed) {
    const int k = child.params.cfg.categories;
    Tape tape;
    GeneratorVars g = GeneratorVars::lift(tape, child.params, true);
    DiscriminatorVars d = DiscriminatorVars::lift(tape, disc, false);

    std::vector<LogitPair> pairs;
    std::vector<Var> all_real, all_fake;
    for (int c = 0; c < k; ++c) {
        Eigen::MatrixXi real = detail::category_rows(data, c, batch_size,
                                                     derive_seed(step_seed, 0x3ea1ULL, static_cast<std::uint64_t>(c)));
        Var real_logits = discriminate_hard(tape, d, real);
        std::vector<int> cats(static_cast<std::size_t>(batch_size), c);
        SoftSequenceBatch fake = generate(tape, g, cats, data.T, tau,
                                          gumbel_noise(derive_seed(step_seed, 0xfa4eULL, static_cast<std::uint64_t>(c))));
        Var fake_logits = discriminate(tape, d, fake.soft);
        pairs.push_back(LogitPair{real_logits, fake_logits});
        all_real.push_back(real_logits);
        all_fake.push_back(fake_logits);
    }
    LogitPair all{ad::concat_rows(all_real), ad::concat_rows(all_fake)};
    Var loss = child.direction.objective == Objective::CatRa ? g_loss_catra(pairs, all)
                                                             : g_loss_catrs(pairs, all);
    ad::backward(loss);
    auto grads = collect_grads(g);
    if (!grads_finite<GeneratorVars>(grads) || !std::isfinite(loss.value()(0, 0))) return false;
    adam_step(child.params, grads, child.opt, lr);
    return true;
}

// Asexual reproduction: deep-copy the parent, then apply gen_steps updates in
// the given mutation direction. The parent is never touched; a non-finite
// gradient marks the child invalid instead of corrupting it.
inline Individual vary(const Individual& parent, MutationDirection dir, int gen_steps,
                       const DiscriminatorParams& disc, const LabeledDataset& data,
                       double tau, int batch_size, double lr, std::uint64_t seed) {
    Individual child;
    child.params = parent.params;
    child.opt = parent.opt;
    child.direction = dir;
    for (int s = 0; s < gen_steps; ++s) {
        if (!variation_step(child, disc, data, tau, batch_size, lr,
                            derive_seed(seed, static_cast<std::uint64_t>(s)))) {
            child.valid = false;
            break;
        }
    }
    return child;
}

struct FitnessResult {
    double f_temp = 0.0;
    double f_obj = 0.0;
    double nll_div_est = 0.0;
};

// Hierarchical evaluation of one candidate: eval_n samples at temperature
// tau against one pooled real batch. f_temp is the mean relativistic score
// of the fakes; f_obj adds lambda times the self-NLL of the same samples.
inline FitnessResult evaluate_fitness(const GeneratorParams& gen, const DiscriminatorParams& disc,
                                      const Eigen::MatrixXi& real_batch, int eval_n,
                                      double lambda, double tau, std::uint64_t noise_seed) {
    if (real_batch.rows() == 0) throw std::invalid_argument("evaluate_fitness: empty real batch");
    if (eval_n < 1) throw std::invalid_argument("evaluate_fitness: eval_n must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("evaluate_fitness: lambda must be >= 0");
    const int k = gen.cfg.categories;
    const int T = static_cast<int>(real_batch.cols());

    Tape tape(false);
    GeneratorVars g = GeneratorVars::lift(tape, gen, false);
    DiscriminatorVars d = DiscriminatorVars::lift(tape, disc, false);

    std::vector<int> cats(static_cast<std::size_t>(eval_n));
    for (int i = 0; i < eval_n; ++i) cats[static_cast<std::size_t>(i)] = i % k;
    SoftSequenceBatch fake = generate(tape, g, cats, T, tau, gumbel_noise(noise_seed));

    const double mean_real = discriminate_hard(tape, d, real_batch).value().mean();
    Eigen::VectorXd fake_logits = discriminate(tape, d, fake.soft).value().col(0);
    double f_temp = 0.0;
    for (int i = 0; i < eval_n; ++i)
        f_temp += 1.0 / (1.0 + std::exp(-(fake_logits(i) - mean_real)));
    f_temp /= eval_n;

    const double nll = -sequence_log_prob(tape, g, fake.hard, cats).value().mean();

    FitnessResult r;
    r.f_temp = f_temp;
    r.nll_div_est = nll;
    r.f_obj = f_temp + lambda * nll;
    return r;
}

// Two-stage selection. Stage_temp keeps, per objective, the child with the
// best f_temp (ties: lowest temperature offset). Stage_obj keeps the winner
// with the best f_obj (ties: CatRa). Returns the surviving child's index and
// fills the audit flags.
inline std::size_t select_hierarchical(std::vector<Individual>& children,
                                       std::vector<ChildFitness>* table = nullptr) {
    if (children.empty()) throw std::invalid_argument("select: no children");
    if (table) {
        table->clear();
        for (const Individual& c : children)
            table->push_back(ChildFitness{c.direction.temp_offset,
                                          objective_name(c.direction.objective), c.valid,
                                          c.f_temp, c.f_obj, false, false});
    }

    auto pick_stage_temp = [&](Objective obj) -> int {
        int best = -1;
        for (std::size_t i = 0; i < children.size(); ++i) {
            const Individual& c = children[i];
            if (!c.valid || c.direction.objective != obj) continue;
            if (best < 0 || c.f_temp > children[static_cast<std::size_t>(best)].f_temp ||
                (c.f_temp == children[static_cast<std::size_t>(best)].f_temp &&
                 c.direction.temp_offset < children[static_cast<std::size_t>(best)].direction.temp_offset))
                best = static_cast<int>(i);
        }
        return best;
    };

    // Stage_obj preference order puts CatRa first so exact ties keep CatRa.
    int survivor = -1;
    for (Objective obj : {Objective::CatRa, Objective::CatRS}) {
        const int w = pick_stage_temp(obj);
        if (w < 0) continue;
        if (table) (*table)[static_cast<std::size_t>(w)].stage_temp_winner = true;
        if (survivor < 0 ||
            children[static_cast<std::size_t>(w)].f_obj > children[static_cast<std::size_t>(survivor)].f_obj)
            survivor = w;
    }
    if (survivor < 0) throw std::runtime_error("select: every child is invalid, aborting round");
    if (table) (*table)[static_cast<std::size_t>(survivor)].survivor = true;
    return static_cast<std::size_t>(survivor);
}

// ---- the full adversarial loop ----

struct TrainContext {
    const LabeledDataset* train_data = nullptr;
    const LabeledDataset* test_data = nullptr;   // enables nll_gen logging
    const OracleModel* oracle = nullptr;         // enables nll_oracle logging
    // called after each round that produces a checkpoint
    std::function<void(int round, const GeneratorParams&, const AdamState&,
                       const DiscriminatorParams&, const AdamState&, int schedule_pos)>
        on_checkpoint;
    std::function<void(const MetricRecord&)> on_record;
    std::function<void(const SelectionRecord&)> on_selection;
};

struct TrainResult {
    std::vector<MetricRecord> records;
    std::vector<SelectionRecord> selections;
    int schedule_pos = 0;
};

namespace detail {

inline MetricRecord make_record(int round, double tau, const std::string& objective,
                                int offset, double f_temp, double f_obj,
                                const GeneratorParams& gen, const TrainSettings& s,
                                const TrainContext& ctx, int T) {
    MetricRecord rec;
    rec.round = round;
    rec.tau = tau;
    rec.objective_chosen = objective;
    rec.temp_offset_chosen = offset;
    rec.f_temp = f_temp;
    rec.f_obj = f_obj;
    const int k = gen.cfg.categories;
    const std::uint64_t mseed = derive_seed(s.seed, static_cast<std::uint64_t>(round), 0x3e7ULL);
    std::vector<double> div_vals;
    for (int c = 0; c < k; ++c)
        div_vals.push_back(nll_div(gen, c, s.metric_samples, T, derive_seed(mseed, 1, static_cast<std::uint64_t>(c))));
    rec.nll_div = harmonic_mean(div_vals);
    if (ctx.oracle) {
        std::vector<double> vals;
        for (int c = 0; c < k; ++c)
            vals.push_back(nll_oracle_metric(*ctx.oracle, gen, c, s.metric_samples, T,
                                             derive_seed(mseed, 2, static_cast<std::uint64_t>(c))));
        rec.nll_oracle = harmonic_mean(vals);
    }
    if (ctx.test_data) {
        std::vector<double> vals;
        for (int c = 0; c < k; ++c) vals.push_back(nll_gen(gen, *ctx.test_data, c));
        rec.nll_gen = harmonic_mean(vals);
    }
    return rec;
}

} // namespace detail

// The hierarchical evolutionary loop. Each round spawns children over the
// TMS x OMS grid from the single parent, evaluates and selects hierarchically,
// then updates the discriminator environment against the survivor. All
// randomness is derived from (seed, round, purpose), so a run can be resumed
// at any round boundary and reproduces the uninterrupted stream.
inline TrainResult train_adversarial(GeneratorParams& gen, AdamState& gen_opt,
                                     DiscriminatorParams& disc, AdamState& disc_opt,
                                     const TrainSettings& s, const TrainContext& ctx,
                                     int start_round = 1, int start_schedule_pos = 0) {
    if (!ctx.train_data) throw std::invalid_argument("train_adversarial: no training data");
    const LabeledDataset& data = *ctx.train_data;
    TemperatureSchedule sched(s.tau_tar, s.rounds);
    const int k = gen.cfg.categories;
    if (data.k != k) throw std::invalid_argument("train_adversarial: dataset/generator k mismatch");

    TrainResult result;
    result.schedule_pos = start_schedule_pos;

    auto emit_record = [&](MetricRecord rec) {
        if (ctx.on_record) ctx.on_record(rec);
        result.records.push_back(std::move(rec));
    };

    if (start_round <= 1) {
        // round 0 marks the end of pretraining; plots draw the boundary here
        Eigen::MatrixXi real0 = detail::draw_rows(data, s.eval_n,
                                                  derive_seed(s.seed, 0, 0xea1ULL));
        FitnessResult f0 = evaluate_fitness(gen, disc, real0, s.eval_n, s.lambda,
                                            sched.at(result.schedule_pos),
                                            derive_seed(s.seed, 0, 0x9015eULL));
        emit_record(detail::make_record(0, sched.at(result.schedule_pos), "none", 0,
                                        f0.f_temp, f0.f_obj, gen, s, ctx, data.T));
    }

    Individual parent;
    parent.params = gen;
    parent.opt = gen_opt;

    for (int round = start_round; round <= s.rounds; ++round) {
        const int pos = s.persistent_offsets ? result.schedule_pos : round;

        std::vector<MutationDirection> directions;
        if (s.no_h) {
            directions.push_back(MutationDirection{0, Objective::CatRa});
        } else {
            std::vector<Objective> objectives =
                s.no_o ? std::vector<Objective>{Objective::CatRa}
                       : std::vector<Objective>{Objective::CatRS, Objective::CatRa};
            std::vector<int> offsets = s.no_t ? std::vector<int>{0} : std::vector<int>{-1, 0, 1};
            for (Objective o : objectives)
                for (int off : offsets) directions.push_back(MutationDirection{off, o});
        }

        std::vector<Individual> children;
        children.reserve(directions.size());
        for (std::size_t ci = 0; ci < directions.size(); ++ci) {
            const MutationDirection dir = directions[ci];
            children.push_back(vary(parent, dir, s.gen_steps, disc, data,
                                    sched.at(pos, dir.temp_offset), s.batch_size, s.lr_gen,
                                    derive_seed(s.seed, static_cast<std::uint64_t>(round), 0xc41dULL,
                                                static_cast<std::uint64_t>(ci))));
        }

        // children are compared on one shared real batch and one shared
        // generation noise stream per round
        Eigen::MatrixXi real_eval = detail::draw_rows(data, s.eval_n,
                                                      derive_seed(s.seed, static_cast<std::uint64_t>(round), 0xea1ULL));
        const std::uint64_t eval_noise = derive_seed(s.seed, static_cast<std::uint64_t>(round), 0x9015eULL);
        for (Individual& c : children) {
            if (!c.valid) continue;
            FitnessResult f = evaluate_fitness(c.params, disc, real_eval, s.eval_n, s.lambda,
                                               sched.at(pos, c.direction.temp_offset), eval_noise);
            c.f_temp = f.f_temp;
            c.f_obj = f.f_obj;
        }

        SelectionRecord sel;
        sel.round = round;
        std::size_t win;
        if (s.no_h) {
            if (!children[0].valid)
                throw std::runtime_error("train: the only child is invalid at round " +
                                         std::to_string(round));
            win = 0;
            sel.children.push_back(ChildFitness{children[0].direction.temp_offset,
                                                objective_name(children[0].direction.objective),
                                                true, children[0].f_temp, children[0].f_obj,
                                                true, true});
        } else {
            win = select_hierarchical(children, &sel.children);
        }
        if (ctx.on_selection) ctx.on_selection(sel);
        result.selections.push_back(sel);

        parent = std::move(children[win]);
        if (s.persistent_offsets)
            result.schedule_pos = std::min(std::max(result.schedule_pos + 1 +
                                                        parent.direction.temp_offset, 0),
                                           s.rounds);
        else
            result.schedule_pos = round;

        // discriminator update against the survivor at the schedule temperature
        const double tau_now = sched.at(result.schedule_pos);
        for (int dstep = 0; dstep < s.d_steps; ++dstep) {
            Tape tape;
            GeneratorVars g = GeneratorVars::lift(tape, parent.params, false);
            DiscriminatorVars d = DiscriminatorVars::lift(tape, disc, true);
            std::vector<LogitPair> pairs;
            std::vector<Var> all_real, all_fake;
            for (int c = 0; c < k; ++c) {
                Eigen::MatrixXi real = detail::category_rows(
                    data, c, s.batch_size,
                    derive_seed(s.seed, static_cast<std::uint64_t>(round), 0xd4ea1ULL,
                                static_cast<std::uint64_t>(dstep * k + c)));
                std::vector<int> cats(static_cast<std::size_t>(s.batch_size), c);
                SoftSequenceBatch fake = generate(tape, g, cats, data.T, tau_now,
                                                  gumbel_noise(derive_seed(s.seed, static_cast<std::uint64_t>(round), 0xd4fa4eULL,
                                                                           static_cast<std::uint64_t>(dstep * k + c))));
                pairs.push_back(LogitPair{discriminate_hard(tape, d, real),
                                          discriminate(tape, d, fake.soft)});
                all_real.push_back(pairs.back().real);
                all_fake.push_back(pairs.back().fake);
            }
            LogitPair all{ad::concat_rows(all_real), ad::concat_rows(all_fake)};
            Var loss = d_loss_catra(pairs, all);
            if (!std::isfinite(loss.value()(0, 0))) {
                if (ctx.on_checkpoint)
                    ctx.on_checkpoint(round, parent.params, parent.opt, disc, disc_opt,
                                      result.schedule_pos);
                throw std::runtime_error("train: non-finite discriminator loss at round " +
                                         std::to_string(round) +
                                         "; diagnostic checkpoint emitted");
            }
            ad::backward(loss);
            adam_step(disc, collect_grads(d), disc_opt, s.lr_disc);
        }

        if (round % s.log_every == 0 || round == s.rounds) {
            emit_record(detail::make_record(round, tau_now,
                                            objective_name(parent.direction.objective),
                                            parent.direction.temp_offset, parent.f_temp,
                                            parent.f_obj, parent.params, s, ctx, data.T));
        }
        if (ctx.on_checkpoint && (round % s.checkpoint_every == 0 || round == s.rounds))
            ctx.on_checkpoint(round, parent.params, parent.opt, disc, disc_opt,
                              result.schedule_pos);
    }

    gen = parent.params;
    gen_opt = parent.opt;
    return result;
}

} // namespace catgan

#endif // CATGAN_EVOLUTION_HPP
