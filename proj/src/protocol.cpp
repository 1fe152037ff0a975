#include "triwork/protocol.hpp"

#include "triwork/errors.hpp"
#include "triwork/parallel.hpp"
#include "triwork/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace triwork {

namespace {

constexpr long kBlock = 4096;

// Sampler over `dim` outcomes. Exact mode keeps one CDF; sequential mode keeps
// the marginal of the first bit, then the conditional of each next bit.
struct Sampler {
    int bits = 0;
    std::vector<double> cdf;          // exact mode
    std::vector<double> p_zero;       // sequential: P(next bit = 0 | prefix), keyed by (depth, prefix)
    SamplingMode mode = SamplingMode::ExactJoint;

    int draw(const Philox4x32& rng, std::uint64_t shot) const {
        const auto u01 = rng.uniforms(shot, 0);
        if (mode == SamplingMode::ExactJoint) {
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u01[0]);
            return std::min(static_cast<int>(it - cdf.begin()), static_cast<int>(cdf.size()) - 1);
        }
        const auto u23 = rng.uniforms(shot, 1);
        const double u[4] = {u01[0], u01[1], u23[0], u23[1]};
        int prefix = 0;
        for (int depth = 0; depth < bits; ++depth) {
            const double p0 = p_zero[static_cast<std::size_t>((1 << depth) - 1 + prefix)];
            prefix = (prefix << 1) | (u[depth] < p0 ? 0 : 1);
        }
        return prefix;
    }
};

std::vector<double> permuted_distribution(const DensityMatrix& rho, std::span<const SiteDirection> order) {
    const int n = rho.n_qubits();
    std::array<Direction, kMaxQubits> dirs;
    for (const auto& sd : order) dirs[static_cast<std::size_t>(index_of(sd.site))] = sd.direction;
    const auto probs = outcome_distribution(rho, std::span<const Direction>(dirs.data(), static_cast<std::size_t>(n)));
    // Re-key so that order[0] is the most significant bit.
    std::vector<double> out(probs.size(), 0.0);
    for (std::size_t b = 0; b < probs.size(); ++b) {
        int key = 0;
        for (const auto& sd : order) key = (key << 1) | static_cast<int>((b >> (n - 1 - index_of(sd.site))) & 1);
        out[static_cast<std::size_t>(key)] = probs[b];
    }
    return out;
}

Sampler exact_sampler(const std::vector<double>& probs, int bits) {
    Sampler s;
    s.bits = bits;
    s.mode = SamplingMode::ExactJoint;
    double acc = 0.0;
    for (double p : probs) s.cdf.push_back(acc += p);
    for (double& c : s.cdf) c /= acc;
    return s;
}

// Sequential collapse: measure order[0] on rho, condition on the outcome,
// measure order[1] on the post-measurement state, and so on.
Sampler sequential_sampler(const DensityMatrix& rho, std::span<const SiteDirection> order) {
    Sampler s;
    s.bits = static_cast<int>(order.size());
    s.mode = SamplingMode::SequentialCollapse;
    s.p_zero.assign(static_cast<std::size_t>((1 << s.bits) - 1), 0.5);
    for (int depth = 0; depth < s.bits; ++depth) {
        for (int prefix = 0; prefix < (1 << depth); ++prefix) {
            std::vector<SiteProjector> measured;
            for (int d = 0; d < depth; ++d) {
                const int bit = (prefix >> (depth - 1 - d)) & 1;
                measured.push_back({order[d].site, projector(order[d].direction, bit)});
            }
            const SiteProjector next{order[depth].site, projector(order[depth].direction, 0)};
            double p0 = 0.5;
            if (depth == 0) {
                p0 = joint_prob(rho, std::span<const SiteProjector>(&next, 1));
            } else if (joint_prob(rho, measured) >= kBranchCutoff) {
                std::vector<SiteProjector> with_next = measured;
                with_next.push_back(next);
                p0 = joint_prob(rho, with_next) / joint_prob(rho, measured);
            }
            s.p_zero[static_cast<std::size_t>((1 << depth) - 1 + prefix)] = std::clamp(p0, 0.0, 1.0);
        }
    }
    return s;
}

std::vector<int> draw_all(const Sampler& sampler, const ProtocolRunConfig& cfg, std::vector<long>& counts,
                          bool keep) {
    const Philox4x32 rng(cfg.seed);
    const std::size_t blocks = static_cast<std::size_t>((cfg.shots + kBlock - 1) / kBlock);
    const std::size_t dim = counts.size();
    struct BlockOut {
        std::vector<long> counts;
        std::vector<int> outcomes;
    };
    auto per_block = parallel_map<BlockOut>(blocks, [&](std::size_t b) {
        BlockOut out;
        out.counts.assign(dim, 0);
        const long begin = static_cast<long>(b) * kBlock;
        const long end = std::min(cfg.shots, begin + kBlock);
        for (long s = begin; s < end; ++s) {
            const int o = sampler.draw(rng, static_cast<std::uint64_t>(s));
            ++out.counts[static_cast<std::size_t>(o)];
            if (keep) out.outcomes.push_back(o);
        }
        return out;
    });
    std::vector<int> outcomes;
    for (auto& blk : per_block) {
        for (std::size_t i = 0; i < dim; ++i) counts[i] += blk.counts[i];
        outcomes.insert(outcomes.end(), blk.outcomes.begin(), blk.outcomes.end());
    }
    return outcomes;
}

} // namespace

double plugin_conditional_entropy(std::span<const long> counts, bool miller_madow) {
    long total = 0;
    for (long c : counts) total += c;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t key = 0; key + 1 < counts.size(); key += 2) {
        const long n0 = counts[key];
        const long n1 = counts[key + 1];
        const long n = n0 + n1;
        if (n == 0) continue;
        double hk = binary_entropy(static_cast<double>(n0) / static_cast<double>(n));
        if (miller_madow) {
            const int bins = (n0 > 0) + (n1 > 0);
            hk += (bins - 1) / (2.0 * static_cast<double>(n) * std::log(2.0));
        }
        h += static_cast<double>(n) / static_cast<double>(total) * hk;
    }
    return h;
}

ProtocolEstimate simulate_tripartite(const ProtocolRunConfig& cfg, std::ostream* transcript) {
    if (cfg.state.n_qubits() != 3) throw ShapeError("simulate_tripartite needs a 3-qubit state");
    if (cfg.shots < 1) throw ArgumentError("shots must be at least 1");
    const Roles& r = cfg.roles;
    const SiteDirection order[] = {{r.z_measurer, cfg.z}, {r.u_measurer, cfg.u}, {r.extractor, cfg.u}};
    const Sampler sampler = cfg.mode == SamplingMode::ExactJoint
                                ? exact_sampler(permuted_distribution(cfg.state, order), 3)
                                : sequential_sampler(cfg.state, order);

    std::vector<long> counts(8, 0);
    const auto outcomes = draw_all(sampler, cfg, counts, transcript != nullptr);
    if (transcript) {
        for (std::size_t s = 0; s < outcomes.size(); ++s) {
            const int o = outcomes[s];
            *transcript << "{\"shot\":" << s << ",\"i\":" << ((o >> 2) & 1) << ",\"j\":" << ((o >> 1) & 1)
                        << ",\"k\":" << (o & 1) << "}\n";
        }
    }

    ProtocolEstimate est;
    est.shots = cfg.shots;
    est.empirical_work = 1.0 - plugin_conditional_entropy(counts, cfg.miller_madow);
    const SiteDirection measured[] = {order[0], order[1]};
    est.analytic_work = 1.0 - conditional_entropy(cfg.state, order[2], measured);
    est.abs_error = std::abs(est.empirical_work - est.analytic_work);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            est.branch_counts[{i, j}] = counts[static_cast<std::size_t>(4 * i + 2 * j)] +
                                        counts[static_cast<std::size_t>(4 * i + 2 * j + 1)];
        }
    }
    return est;
}

ProtocolEstimate simulate_bipartite(const ProtocolRunConfig& cfg, std::ostream* transcript) {
    if (cfg.state.n_qubits() != 2) throw ShapeError("simulate_bipartite needs a 2-qubit state");
    if (cfg.shots < 2 || cfg.shots % 2 != 0) {
        throw PreconditionError("bipartite protocol needs an even, positive number of shots (got " +
                                std::to_string(cfg.shots) + ")");
    }
    // Both halves sample the same (A along z, B along u) distribution; only
    // the roles in the entropy estimate differ.
    const SiteDirection order[] = {{Site::A, cfg.z}, {Site::B, cfg.u}};
    const Sampler sampler = cfg.mode == SamplingMode::ExactJoint
                                ? exact_sampler(permuted_distribution(cfg.state, order), 2)
                                : sequential_sampler(cfg.state, order);

    std::vector<long> all(4, 0);
    const auto outcomes = draw_all(sampler, cfg, all, true);
    const long half = cfg.shots / 2;
    std::vector<long> a_measures(4, 0); // key (A, B): B's entropy given A
    std::vector<long> b_measures(4, 0); // key (B, A): A's entropy given B
    for (long s = 0; s < cfg.shots; ++s) {
        const int o = outcomes[static_cast<std::size_t>(s)];
        const int a = (o >> 1) & 1;
        const int b = o & 1;
        if (s < half) {
            ++a_measures[static_cast<std::size_t>(2 * a + b)];
        } else {
            ++b_measures[static_cast<std::size_t>(2 * b + a)];
        }
        if (transcript) {
            *transcript << "{\"shot\":" << s << ",\"role\":\"" << (s < half ? "A-measures" : "B-measures")
                        << "\",\"i\":" << a << ",\"j\":" << b << "}\n";
        }
    }

    ProtocolEstimate est;
    est.shots = cfg.shots;
    const double h_b_given_a = plugin_conditional_entropy(a_measures, cfg.miller_madow);
    const double h_a_given_b = plugin_conditional_entropy(b_measures, cfg.miller_madow);
    est.empirical_work = 1.0 - 0.5 * (h_b_given_a + h_a_given_b);
    est.analytic_work = xi_bipartite(cfg.state, cfg.z, cfg.u);
    est.abs_error = std::abs(est.empirical_work - est.analytic_work);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) est.branch_counts[{i, j}] = all[static_cast<std::size_t>(2 * i + j)];
    }
    return est;
}

} // namespace triwork
