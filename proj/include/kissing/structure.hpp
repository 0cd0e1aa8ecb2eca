#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kissing/errors.hpp"
#include "kissing/shells.hpp"

namespace kissing {

namespace detail {
struct CoordHash {
    size_t operator()(const std::vector<std::int32_t>& v) const {
        size_t h = 1469598103934665603ULL;
        for (std::int32_t x : v) {
            h ^= static_cast<size_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ULL;
        }
        return h;
    }
};

inline long floor_div(long a, long b) { // b > 0
    long q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}
} // namespace detail

/// Vectors of a collected shell set grouped by coordinate parity, i.e. by
/// residue mod 2L. Residues are bitmasks over the basis coordinates.
struct ClassPartition {
    int dim = 0;
    std::map<std::uint32_t, std::vector<size_t>> classes; // residue -> indices into X.vectors
};

/// m[i] = number of classes holding exactly i antipodal pairs.
struct ClassProfile {
    std::map<int, std::uint64_t> m;
    std::uint64_t pairs_total = 0;
    std::uint64_t m_at(int i) const {
        auto it = m.find(i);
        return it == m.end() ? 0 : it->second;
    }
};

inline std::uint32_t residue_key(const std::vector<std::int32_t>& z) {
    std::uint32_t key = 0;
    for (size_t i = 0; i < z.size(); ++i) key |= static_cast<std::uint32_t>(z[i] & 1) << i;
    return key;
}

inline std::pair<ClassPartition, ClassProfile> partition_mod2(const ShellSet& x) {
    if (x.mode != ShellMode::collect || x.pairs)
        throw std::invalid_argument("partition_mod2: needs a fully collected shell set");
    ClassPartition part;
    part.dim = x.vectors.empty() ? 0 : static_cast<int>(x.vectors.front().coords.size());
    for (size_t i = 0; i < x.vectors.size(); ++i) part.classes[residue_key(x.vectors[i].coords)].push_back(i);
    if (part.classes.count(0) && x.hi2 < Rational(16))
        throw integrity_error("partition_mod2: residue 0 occupied below norm^2 16; not a packing lattice");
    ClassProfile prof;
    for (const auto& [key, members] : part.classes) {
        if (members.size() % 2 != 0) throw integrity_error("partition_mod2: class of odd size");
        const int pairs = static_cast<int>(members.size() / 2);
        ++prof.m[pairs];
        prof.pairs_total += static_cast<std::uint64_t>(pairs);
    }
    return {std::move(part), std::move(prof)};
}

struct EquivalenceViolation {
    std::vector<std::int32_t> v1, v2;
    Rational norm1, norm2, inner;
};

/// Below norm^2 8, two distinct non-antipodal equivalent vectors must both
/// have norm^2 8 and be orthogonal; returns every pair violating that.
inline std::vector<EquivalenceViolation> check_remark21(const GramLattice& lat, const ShellSet& x) {
    if (x.hi2 > Rational(8)) throw std::invalid_argument("check_remark21: requires hi2 <= 8");
    auto [part, prof] = partition_mod2(x);
    std::vector<EquivalenceViolation> bad;
    const Rational eight(8);
    for (const auto& [key, members] : part.classes) {
        for (size_t a = 0; a < members.size(); ++a) {
            for (size_t b = a + 1; b < members.size(); ++b) {
                const auto& u = x.vectors[members[a]];
                const auto& w = x.vectors[members[b]];
                bool antipodal = true;
                for (size_t i = 0; i < u.coords.size(); ++i)
                    if (u.coords[i] != -w.coords[i]) { antipodal = false; break; }
                if (antipodal) continue;
                const Rational ip = lat.inner(u.coords, w.coords);
                if (u.norm2 != eight || w.norm2 != eight || !ip.is_zero())
                    bad.push_back({u.coords, w.coords, u.norm2, w.norm2, ip});
            }
        }
    }
    return bad;
}

/// A line carrying >= 4 points of X: canonical base point, primitive
/// direction, the member points sorted along the direction, and the maximal
/// arithmetic progressions of length >= 4 among their line parameters.
struct CollinearLine {
    std::vector<std::int32_t> base, dir;
    std::vector<std::vector<std::int32_t>> points;
    std::vector<std::vector<long>> progressions;
};

inline std::vector<CollinearLine> find_collinear_quadruples(const ShellSet& x) {
    if (x.mode != ShellMode::collect || x.pairs)
        throw std::invalid_argument("find_collinear_quadruples: needs a fully collected shell set");
    const size_t n = x.vectors.size();
    const size_t dim = n ? x.vectors[0].coords.size() : 0;
    using Coords = std::vector<std::int32_t>;
    struct Key {
        Coords dir, base;
        bool operator==(const Key& o) const { return dir == o.dir && base == o.base; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            detail::CoordHash h;
            return h(k.dir) * 1000003 + h(k.base);
        }
    };
    std::unordered_map<Key, std::map<long, Coords>, KeyHash> lines;
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = a + 1; b < n; ++b) {
            const Coords& u = x.vectors[a].coords;
            const Coords& w = x.vectors[b].coords;
            Coords d(dim);
            std::int64_t g = 0;
            for (size_t i = 0; i < dim; ++i) {
                d[i] = w[i] - u[i];
                g = std::gcd(g, static_cast<std::int64_t>(std::abs(static_cast<long>(d[i]))));
            }
            for (auto& v : d) v = static_cast<std::int32_t>(v / g);
            size_t piv = 0;
            while (d[piv] == 0) ++piv;
            if (d[piv] < 0)
                for (auto& v : d) v = -v;
            const long step = d[piv];
            const long q = detail::floor_div(u[piv], step);
            Coords base(dim);
            for (size_t i = 0; i < dim; ++i) base[i] = u[i] - static_cast<std::int32_t>(q) * d[i];
            auto& pts = lines[Key{d, base}];
            pts[(u[piv] - base[piv]) / step] = u;
            pts[(w[piv] - base[piv]) / step] = w;
        }
    }
    std::vector<CollinearLine> out;
    for (auto& [key, pts] : lines) {
        if (pts.size() < 4) continue;
        CollinearLine line;
        line.base = key.base;
        line.dir = key.dir;
        std::vector<long> ts;
        for (auto& [t, p] : pts) {
            ts.push_back(t);
            line.points.push_back(p);
        }
        std::set<long> tset(ts.begin(), ts.end());
        std::set<std::pair<long, long>> seen;
        for (size_t i = 0; i < ts.size(); ++i) {
            for (size_t j = i + 1; j < ts.size(); ++j) {
                const long s = ts[j] - ts[i];
                if (tset.count(ts[i] - s)) continue; // not a maximal start
                if (seen.count({ts[i], s})) continue;
                std::vector<long> run{ts[i]};
                long t = ts[i] + s;
                while (tset.count(t)) {
                    run.push_back(t);
                    t += s;
                }
                if (run.size() >= 4) {
                    seen.insert({ts[i], s});
                    line.progressions.push_back(std::move(run));
                }
            }
        }
        out.push_back(std::move(line));
    }
    std::sort(out.begin(), out.end(),
              [](const CollinearLine& a, const CollinearLine& b) { return std::tie(a.dir, a.base) < std::tie(b.dir, b.base); });
    return out;
}

/// Unordered triples {v1, v2, v3} of X with v2 = (v1 + v3)/2, stored as
/// [v1, midpoint, v3].
struct MidpointTripleSet {
    std::vector<std::array<std::vector<std::int32_t>, 3>> triples;
    std::uint64_t count() const { return triples.size(); }
};

inline MidpointTripleSet midpoint_triples(const ShellSet& x) {
    if (x.mode != ShellMode::collect || x.pairs)
        throw std::invalid_argument("midpoint_triples: needs a fully collected shell set");
    MidpointTripleSet out;
    const size_t dim = x.vectors.empty() ? 0 : x.vectors[0].coords.size();
    std::unordered_set<std::vector<std::int32_t>, detail::CoordHash> members;
    for (const auto& v : x.vectors) members.insert(v.coords);
    // the midpoint is integral iff v1 and v3 share a residue class mod 2
    std::unordered_map<std::uint32_t, std::vector<const std::vector<std::int32_t>*>> classes;
    for (const auto& v : x.vectors) classes[residue_key(v.coords)].push_back(&v.coords);
    for (const auto& [key, vs] : classes) {
        for (size_t a = 0; a < vs.size(); ++a) {
            for (size_t b = a + 1; b < vs.size(); ++b) {
                const auto& u = *vs[a];
                const auto& w = *vs[b];
                bool antipodal = true;
                for (size_t i = 0; i < dim; ++i)
                    if (u[i] != -w[i]) { antipodal = false; break; }
                if (antipodal) continue;
                std::vector<std::int32_t> mid(dim);
                for (size_t i = 0; i < dim; ++i) mid[i] = (u[i] + w[i]) / 2;
                if (members.count(mid)) out.triples.push_back({u, std::move(mid), w});
            }
        }
    }
    return out;
}

struct DoubleCountReport {
    std::uint64_t card_c = 0;       // number of midpoint triples
    std::uint64_t identity_sum = 0; // sum 2i(i-1) m_i
    std::uint64_t rhs = 0;          // kappa_prev * m_1
    bool identity_ok = false;
    bool inequality_ok = false;
    bool equality = false;
};

/// Double-counting check: card C = sum 2i(i-1) m_i must hold exactly, and
/// both are bounded by kappa_prev * m_1. Identity failure is an integrity
/// error (it means the enumeration or the partition is wrong).
inline DoubleCountReport lemma62_check(const ClassProfile& profile, const MidpointTripleSet& triples,
                                       std::uint64_t kappa_prev) {
    DoubleCountReport rep;
    rep.card_c = triples.count();
    for (const auto& [i, mi] : profile.m)
        rep.identity_sum += 2ULL * static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(i - 1) * mi;
    rep.identity_ok = rep.card_c == rep.identity_sum;
    if (!rep.identity_ok)
        throw integrity_error("lemma62_check: midpoint triple count " + std::to_string(rep.card_c) +
                              " != profile sum " + std::to_string(rep.identity_sum));
    rep.rhs = kappa_prev * profile.m_at(1);
    rep.inequality_ok = rep.card_c <= rep.rhs;
    rep.equality = rep.card_c == rep.rhs;
    return rep;
}

/// All nonnegative integer profiles (m_1..m_n) with
///   sum_i i*m_i >= ceil(target/2),
///   sum_i m_i <= class_budget,
///   sum_{i>=2} 2i(i-1) m_i <= kappa_prev * m_1.
/// kappa_prev is the right-hand multiplier; pass a reduced value for the
/// strict variant of the bound. Search is exhaustive with safe pruning.
inline std::vector<std::vector<std::uint64_t>> solve_profile_system(int n, std::uint64_t kappa_prev,
                                                                    std::uint64_t class_budget,
                                                                    std::uint64_t target,
                                                                    std::uint64_t node_cap = 50'000'000,
                                                                    std::uint64_t solution_cap = 200'000) {
    if (n < 1) throw std::invalid_argument("solve_profile_system: n must be >= 1");
    const std::uint64_t need = (target + 1) / 2;
    std::vector<std::vector<std::uint64_t>> solutions;
    std::vector<std::uint64_t> m(static_cast<size_t>(n) + 1, 0);
    std::uint64_t nodes = 0;

    // assign m_1 first, then m_n..m_2; prune on budget, the inequality cap
    // and the best achievable sum_i i*m_i
    auto rec = [&](auto&& self, int i, std::uint64_t used, std::uint64_t ip, std::uint64_t lhs) -> void {
        if (++nodes > node_cap)
            throw budget_error("solve_profile_system: search exceeded " + std::to_string(node_cap) + " nodes");
        const std::uint64_t left = class_budget - used;
        if (lhs > kappa_prev * m[1]) return;
        if (i < 2) {
            if (ip >= need) {
                solutions.emplace_back(m.begin() + 1, m.end());
                if (solutions.size() > solution_cap)
                    throw budget_error("solve_profile_system: more than " + std::to_string(solution_cap) +
                                       " solutions; refusing to materialize");
            }
            return;
        }
        if (ip + static_cast<std::uint64_t>(i) * left < need) return; // even all-at-i cannot reach the target
        const std::uint64_t coeff = 2ULL * static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(i - 1);
        std::uint64_t cap = left;
        if (kappa_prev * m[1] < lhs) return;
        cap = std::min(cap, (kappa_prev * m[1] - lhs) / coeff);
        for (std::uint64_t v = 0; v <= cap; ++v) {
            m[static_cast<size_t>(i)] = v;
            self(self, i - 1, used + v, ip + static_cast<std::uint64_t>(i) * v, lhs + coeff * v);
        }
        m[static_cast<size_t>(i)] = 0;
    };

    for (std::uint64_t m1 = 0; m1 <= class_budget; ++m1) {
        m[1] = m1;
        if (n == 1) {
            if (m1 >= need) solutions.push_back({m1});
            continue;
        }
        rec(rec, n, m1, m1, 0);
    }
    m[1] = 0;
    return solutions;
}

} // namespace kissing
