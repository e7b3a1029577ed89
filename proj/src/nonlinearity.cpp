#include "grushin/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

Nonlinearity power_nonlinearity(double q, const AlphaParam& alpha) {
    if (!(q > 1.0)) throw DomainError("power nonlinearity needs q > 1");
    Nonlinearity nl;
    nl.kind = Nonlinearity::Kind::power;
    nl.exponent = q;
    nl.alpha = alpha.value();
    nl.f = [alpha, q](const Vec3& p, double xi) {
        return alpha.volume_weight(p) * std::pow(std::abs(xi), q - 2.0) * xi;
    };
    nl.F = [alpha, q](const Vec3& p, double xi) { return alpha.volume_weight(p) * std::pow(std::abs(xi), q) / q; };
    return nl;
}

Nonlinearity custom_nonlinearity(Reaction f, Reaction F, const AlphaParam& alpha, std::optional<GrowthWitness> witness) {
    if (!f || !F) throw DomainError("custom nonlinearity needs both f and its primitive F");
    Nonlinearity nl;
    nl.kind = Nonlinearity::Kind::custom;
    nl.alpha = alpha.value();
    nl.f = std::move(f);
    nl.F = std::move(F);
    nl.witness = std::move(witness);
    return nl;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::heuristic: return "heuristic";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "unknown";
}

namespace {

GrowthReport power_verdicts(double q) {
    GrowthReport r;
    auto set = [&r](int i, bool ok, std::string note) {
        r.verdicts[i] = ok ? Verdict::pass : Verdict::fail;
        r.notes[i] = std::move(note);
    };
    // |xi|^{q-1} <= 1 + |xi|^{s-1} for any s in (max(q,2), 6) with f1 = f2 = 1 (bounded domain).
    set(0, q < 6.0, q < 6.0 ? "f1 = f2 = 1 with a growth exponent in (2, 6)" : "growth |xi|^{q-1} needs q < 6");
    set(1, true, "psi = C^{q-1} is constant");
    set(2, true, "f/xi = |x|^{2a}|xi|^{q-2} >= 0, take the lower function 0");
    set(3, q > 2.0,
        q > 2.0 ? "f/(|x|^{2a} xi) = |xi|^{q-2} tends to 0 and to infinity"
                : "f/(|x|^{2a} xi) = |xi|^{q-2} does not tend to infinity");
    set(4, q > 2.0, q > 2.0 ? "|xi|^{q-2} strictly increasing in |xi|" : "f/xi is not increasing for xi > 0");
    return r;
}

struct Samples {
    std::vector<Vec3> points;
    std::vector<double> xi;  // log-spaced magnitudes of both signs
};

Samples draw_samples(const GrowthSampleConfig& cfg) {
    if (cfg.points < 1) throw DomainError("growth validation needs at least one sample point");
    Samples s;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vec3 e = cfg.region.extent();
    for (int i = 0; i < cfg.points; ++i) {
        const Vec3 p{cfg.region.lo.x1 + e.x1 * u01(rng), cfg.region.lo.x2 + e.x2 * u01(rng),
                     cfg.region.lo.y + e.y * u01(rng)};
        s.points.push_back(p);
    }
    for (int k = -24; k <= 24; ++k) {
        const double m = std::pow(10.0, 0.25 * k);
        s.xi.push_back(m);
        s.xi.push_back(-m);
    }
    return s;
}

GrowthReport custom_verdicts(const Nonlinearity& nl, const GrowthSampleConfig& cfg) {
    GrowthReport r;
    r.verdicts.fill(Verdict::not_applicable);
    const AlphaParam alpha(nl.alpha);
    const Samples s = draw_samples(cfg);
    auto within = [](double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); };
    const GrowthWitness* w = nl.witness ? &*nl.witness : nullptr;

    // (A1)
    if (w && w->q && w->p1 && w->p2 && w->f1 && w->f2) {
        const double q = *w->q, p1 = *w->p1, p2 = *w->p2;
        if (!(q > 2.0 && q < 6.0)) {
            r.verdicts[0] = Verdict::fail;
            r.notes[0] = "declared q outside (2, 6)";
        } else if (!(p2 > 1.0) || q * p2 / (p2 - 1.0) > 6.0) {
            r.verdicts[0] = Verdict::fail;
            r.notes[0] = "p2 must exceed 1 with q p2/(p2-1) <= 6";
        } else if (!(p1 > 6.0 * p2 / (p2 * (q - 1.0) + 6.0)) || !(p1 > 1.5)) {
            r.verdicts[0] = Verdict::fail;
            r.notes[0] = "p1 must exceed 6 p2/(p2 (q-1) + 6) and 3/2";
        } else {
            r.verdicts[0] = Verdict::heuristic;
            r.notes[0] = "growth bound holds at all samples";
            for (const Vec3& p : s.points) {
                for (const double xi : s.xi) {
                    const double bound = alpha.volume_weight(p) * (w->f1(p) + w->f2(p) * std::pow(std::abs(xi), q - 1.0));
                    if (!within(std::abs(nl.f(p, xi)), bound)) {
                        r.verdicts[0] = Verdict::fail;
                        r.notes[0] = "growth bound violated at a sample";
                    }
                }
            }
        }
    } else {
        r.notes[0] = "no (q, p1, p2, f1, f2) witness declared";
    }

    // (A2)
    if (w && w->C && w->psi) {
        r.verdicts[1] = Verdict::heuristic;
        r.notes[1] = "bound holds at all samples with |xi| <= C";
        for (const Vec3& p : s.points) {
            for (const double xi : s.xi) {
                if (std::abs(xi) > *w->C) continue;
                if (!within(std::abs(nl.f(p, xi)), alpha.volume_weight(p) * w->psi(p))) {
                    r.verdicts[1] = Verdict::fail;
                    r.notes[1] = "|f| exceeds |x|^{2a} psi at a sample";
                }
            }
        }
    } else {
        r.notes[1] = "no (C, psi) witness declared";
    }

    // (A3)
    if (w && w->lower) {
        r.verdicts[2] = Verdict::heuristic;
        r.notes[2] = "lower bound holds at all samples";
        for (const Vec3& p : s.points) {
            if (w->lower(p) > 0.0) {
                r.verdicts[2] = Verdict::fail;
                r.notes[2] = "declared lower function is positive somewhere";
            }
            for (const double xi : s.xi) {
                if (xi > 0.0 && !within(w->lower(p), nl.f(p, xi) / xi)) {
                    r.verdicts[2] = Verdict::fail;
                    r.notes[2] = "f/xi falls below the lower function at a sample";
                }
            }
        }
    } else {
        r.notes[2] = "no lower-function witness declared";
    }

    // (A4): needs no witness.
    r.verdicts[3] = Verdict::heuristic;
    r.notes[3] = "f(., 0) = 0 and log-log slope probes consistent with both limits";
    for (const Vec3& p : s.points) {
        const double weight = alpha.volume_weight(p);
        if (nl.f(p, 0.0) != 0.0) {
            r.verdicts[3] = Verdict::fail;
            r.notes[3] = "f(., 0) != 0";
            break;
        }
        if (!(weight > 0.0)) continue;
        for (const double sign : {1.0, -1.0}) {
            auto ratio = [&](double m) { return nl.f(p, sign * m) / (weight * sign * m); };
            const double r6 = ratio(1e-6), r3 = ratio(1e-3), big3 = ratio(1e3), big6 = ratio(1e6);
            const bool to_zero = std::abs(r6) < std::abs(r3) && std::abs(r6) < 1e-2;
            const bool to_inf = big6 > big3 && big6 > 1e2;
            if (!to_zero || !to_inf) {
                r.verdicts[3] = Verdict::fail;
                r.notes[3] = !to_inf ? "f/(|x|^{2a} xi) does not grow at large |xi|"
                                     : "f/(|x|^{2a} xi) does not vanish at small |xi|";
            }
        }
    }

    // (A5)
    if (w && w->C) {
        r.verdicts[4] = Verdict::heuristic;
        r.notes[4] = "f/xi monotone on sampled |xi| >= C";
        std::vector<double> mags;
        for (const double xi : s.xi)
            if (xi > 0.0 && xi >= *w->C) mags.push_back(xi);
        for (const Vec3& p : s.points) {
            for (std::size_t i = 1; i < mags.size(); ++i) {
                const bool up = nl.f(p, mags[i]) / mags[i] > nl.f(p, mags[i - 1]) / mags[i - 1];
                const bool down = nl.f(p, -mags[i]) / -mags[i] > nl.f(p, -mags[i - 1]) / -mags[i - 1];
                if (!up || !down) {
                    r.verdicts[4] = Verdict::fail;
                    r.notes[4] = "f/xi not monotone beyond C at a sample";
                }
            }
        }
    } else {
        r.notes[4] = "no threshold C declared";
    }
    return r;
}

}  // namespace

GrowthReport validate_growth_conditions(const Nonlinearity& nl, const GrowthSampleConfig& cfg) {
    if (nl.kind == Nonlinearity::Kind::power) return power_verdicts(nl.exponent);
    return custom_verdicts(nl, cfg);
}

}  // namespace grushin
