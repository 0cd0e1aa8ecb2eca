#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "kissing/errors.hpp"
#include "kissing/lattice.hpp"

namespace kissing {

enum class ShellMode { count, collect };

struct ShellQuery {
    GramLattice lattice;
    Rational lo2;
    Rational hi2;
    ShellMode mode = ShellMode::count;
    bool pairs = false; // report one vector per antipodal pair
    int threads = 1;
    std::uint64_t node_budget = 10'000'000'000ULL;
};

struct ShellVector {
    std::vector<std::int32_t> coords;
    Rational norm2;
};

struct ShellSet {
    Rational lo2{0};
    Rational hi2{0};
    ShellMode mode = ShellMode::count;
    bool pairs = false;
    std::uint64_t total = 0;
    std::map<Rational, std::uint64_t> histogram; // norm^2 -> vector count
    std::vector<ShellVector> vectors;            // collect mode only, sorted
    std::uint64_t nodes_visited = 0;
};

namespace detail {

// G = sum_j q[j] * (z_j + sum_{i>j} mu[i][j] z_i)^2, all exact.
struct QuadForm {
    int n = 0;
    std::vector<Rational> q;
    std::vector<std::vector<Rational>> mu; // mu[i][j] for j < i
};

inline QuadForm decompose(const RationalMatrix& g) {
    QuadForm f;
    f.n = g.rows();
    f.q.assign(f.n, Rational(0));
    f.mu.assign(f.n, {});
    for (int i = 0; i < f.n; ++i) f.mu[i].assign(i, Rational(0));
    // Gram-Schmidt recurrences on the Gram matrix
    for (int i = 0; i < f.n; ++i) {
        for (int j = 0; j < i; ++j) {
            Rational s = g(i, j);
            for (int k = 0; k < j; ++k) s -= f.mu[i][k] * f.mu[j][k] * f.q[k];
            f.mu[i][j] = s / f.q[j];
        }
        Rational qq = g(i, i);
        for (int k = 0; k < i; ++k) qq -= f.mu[i][k] * f.mu[i][k] * f.q[k];
        if (qq.sign() <= 0) throw integrity_error("decompose: form not positive definite");
        f.q[i] = qq;
    }
    return f;
}

// Largest integer k with k + c <= sqrt(R), i.e. k + c <= 0 or (k+c)^2 <= R.
// Starts from a double hint and fixes up with exact comparisons.
inline long upper_bound_int(const Rational& c, const Rational& r) {
    const double hint = std::floor(std::sqrt(std::max(0.0, r.to_double())) - c.to_double());
    long k = hint > 1e17 ? 100000000000000000L : (hint < -1e17 ? -100000000000000000L : static_cast<long>(hint));
    auto feasible = [&](long v) {
        Rational t = Rational(v) + c;
        if (t.sign() <= 0) return true;
        return t * t <= r;
    };
    while (feasible(k + 1)) ++k;
    while (!feasible(k)) --k;
    return k;
}

// Smallest integer k with k + c >= -sqrt(R).
inline long lower_bound_int(const Rational& c, const Rational& r) {
    const double hint = std::ceil(-std::sqrt(std::max(0.0, r.to_double())) - c.to_double());
    long k = hint > 1e17 ? 100000000000000000L : (hint < -1e17 ? -100000000000000000L : static_cast<long>(hint));
    auto feasible = [&](long v) {
        Rational t = Rational(v) + c;
        if (t.sign() >= 0) return true;
        return t * t <= r;
    };
    while (feasible(k - 1)) --k;
    while (!feasible(k)) ++k;
    return k;
}

struct EnumShared {
    const QuadForm* form = nullptr;
    Rational lo2, hi2;
    ShellMode mode = ShellMode::count;
    std::uint64_t node_budget = 0;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> aborted{false};
};

// One enumeration worker; owns its traversal state and partial results.
class EnumWorker {
  public:
    EnumWorker(EnumShared& shared) : s_(shared), n_(shared.form->n), z_(shared.form->n, 0) {}

    // Enumerates the subtree with levels n-1..level+1 fixed to `prefix`
    // (top to bottom); `leading` means every fixed coordinate is zero.
    void run_prefix(const std::vector<long>& prefix, bool leading, const Rational& partial) {
        for (size_t i = 0; i < prefix.size(); ++i) z_[static_cast<size_t>(n_ - 1) - i] = prefix[i];
        descend(n_ - 1 - static_cast<int>(prefix.size()), leading, partial);
        flush_nodes();
    }

    std::map<Rational, std::uint64_t> hist;            // pair counts per norm^2
    std::vector<std::vector<std::int32_t>> canonical;  // one per antipodal pair

  private:
    void descend(int level, bool leading, const Rational& partial) {
        if (level < 0) {
            if (!leading && partial >= s_.lo2) record(partial);
            return;
        }
        // center c = sum_{i>level} mu[i][level] * z_i
        Rational c(0);
        for (int i = level + 1; i < n_; ++i) {
            if (z_[i] == 0) continue;
            c += s_.form->mu[i][level] * Rational(z_[i]);
        }
        const Rational budget = s_.hi2 - partial;
        if (budget.sign() < 0) return;
        const Rational r = budget / s_.form->q[level];
        long lo = lower_bound_int(c, r);
        const long hi = upper_bound_int(c, r);
        if (leading && lo < 0) lo = 0;
        for (long v = lo; v <= hi; ++v) {
            if (++local_nodes_ >= 4096) flush_nodes();
            z_[level] = v;
            Rational e = Rational(v) + c;
            descend(level - 1, leading && v == 0, partial + s_.form->q[level] * e * e);
        }
        z_[level] = 0;
    }

    void record(const Rational& norm2) {
        ++hist[norm2];
        if (s_.mode == ShellMode::collect) {
            std::vector<std::int32_t> zz(static_cast<size_t>(n_));
            for (int i = 0; i < n_; ++i) zz[i] = static_cast<std::int32_t>(z_[i]);
            canonical.push_back(std::move(zz));
        }
    }

    void flush_nodes() {
        const std::uint64_t total = s_.nodes.fetch_add(local_nodes_) + local_nodes_;
        local_nodes_ = 0;
        if (total > s_.node_budget) {
            s_.aborted.store(true);
            throw budget_error("enumerate_shell: node budget of " + std::to_string(s_.node_budget) +
                               " exceeded; re-run with a larger budget (--long)");
        }
        if (s_.aborted.load()) throw budget_error("enumerate_shell: aborted");
    }

    EnumShared& s_;
    int n_;
    std::vector<long> z_;
    std::uint64_t local_nodes_ = 0;
};

struct Task {
    std::vector<long> prefix; // values for levels n-1, n-2, ...
    bool leading = true;
    Rational partial{0};
};

// Expands the top levels of the canonical half-tree into independent tasks.
inline void expand_tasks(const QuadForm& f, const Rational& hi2, const Task& t, int depth_left,
                         std::vector<Task>& out) {
    const int level = f.n - 1 - static_cast<int>(t.prefix.size());
    if (depth_left == 0 || level < 1) {
        out.push_back(t);
        return;
    }
    Rational c(0);
    for (size_t i = 0; i < t.prefix.size(); ++i) {
        const long zv = t.prefix[i];
        if (zv == 0) continue;
        c += f.mu[f.n - 1 - static_cast<int>(i)][level] * Rational(zv);
    }
    const Rational budget = hi2 - t.partial;
    if (budget.sign() < 0) return;
    const Rational r = budget / f.q[level];
    long lo = lower_bound_int(c, r);
    const long hi = upper_bound_int(c, r);
    if (t.leading && lo < 0) lo = 0;
    for (long v = lo; v <= hi; ++v) {
        Task child;
        child.prefix = t.prefix;
        child.prefix.push_back(v);
        child.leading = t.leading && v == 0;
        Rational e = Rational(v) + c;
        child.partial = t.partial + f.q[level] * e * e;
        expand_tasks(f, hi2, child, depth_left - 1, out);
    }
}

} // namespace detail

/// Enumerates exactly the nonzero lattice vectors z with lo2 <= z^T G z <= hi2
/// (closed interval at both ends). Exhaustive, duplicate free, exact.
inline ShellSet enumerate_shell(const ShellQuery& query) {
    const GramLattice& lat = query.lattice;
    if (lat.dim() > kMaxDim) throw budget_error("enumerate_shell: dimension above 24 refused");
    if (query.lo2.sign() < 0 || query.hi2 < query.lo2)
        throw std::invalid_argument("enumerate_shell: need 0 <= lo2 <= hi2");

    const detail::QuadForm form = detail::decompose(lat.gram());
    detail::EnumShared shared;
    shared.form = &form;
    shared.lo2 = query.lo2;
    shared.hi2 = query.hi2;
    shared.mode = query.mode;
    shared.node_budget = query.node_budget;

    const int threads = std::max(1, query.threads);
    std::vector<detail::EnumWorker> workers;
    workers.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) workers.emplace_back(shared);

    if (threads == 1) {
        workers[0].run_prefix({}, true, Rational(0));
    } else {
        std::vector<detail::Task> tasks;
        detail::Task root;
        int depth = 0;
        size_t want = static_cast<size_t>(threads) * 8;
        while (depth < lat.dim() - 1) {
            tasks.clear();
            detail::expand_tasks(form, query.hi2, root, depth, tasks);
            if (tasks.size() >= want) break;
            ++depth;
        }
        tasks.clear();
        detail::expand_tasks(form, query.hi2, root, depth, tasks);
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (;;) {
                        const size_t i = next.fetch_add(1);
                        if (i >= tasks.size()) break;
                        workers[static_cast<size_t>(w)].run_prefix(tasks[i].prefix, tasks[i].leading,
                                                                   tasks[i].partial);
                    }
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                    shared.aborted.store(true);
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    ShellSet out;
    out.lo2 = query.lo2;
    out.hi2 = query.hi2;
    out.mode = query.mode;
    out.pairs = query.pairs;
    out.nodes_visited = shared.nodes.load();
    const std::uint64_t mult = query.pairs ? 1 : 2;
    for (auto& w : workers)
        for (const auto& [norm, cnt] : w.hist) out.histogram[norm] += cnt * mult;
    for (const auto& [norm, cnt] : out.histogram) out.total += cnt;
    if (query.mode == ShellMode::collect) {
        for (auto& w : workers) {
            for (auto& z : w.canonical) {
                Rational norm = lat.norm2(z);
                if (!query.pairs) {
                    std::vector<std::int32_t> neg(z.size());
                    for (size_t i = 0; i < z.size(); ++i) neg[i] = -z[i];
                    out.vectors.push_back({std::move(neg), norm});
                }
                out.vectors.push_back({std::move(z), norm});
            }
        }
        std::sort(out.vectors.begin(), out.vectors.end(),
                  [](const ShellVector& a, const ShellVector& b) { return a.coords < b.coords; });
    }
    return out;
}

/// Minimum nonzero norm^2, by enumeration bounded by the smallest diagonal
/// Gram entry (the norm of a basis vector).
inline Rational min_norm2(const GramLattice& lat, std::uint64_t node_budget = 10'000'000'000ULL) {
    Rational bound = lat.gram()(0, 0);
    for (int i = 1; i < lat.dim(); ++i)
        if (lat.gram()(i, i) < bound) bound = lat.gram()(i, i);
    ShellQuery q{lat, Rational(0), bound, ShellMode::count, true, 1, node_budget};
    ShellSet s = enumerate_shell(q);
    return s.histogram.begin()->first;
}

struct PackingCheck {
    bool packing = false;
    Rational min_norm2{0};
    std::optional<ShellVector> witness; // a vector with norm^2 < 4, when not a packing
};

/// A lattice packs the unit ball iff its minimum nonzero norm^2 is >= 4.
inline PackingCheck is_packing_lattice(const GramLattice& lat, std::uint64_t node_budget = 10'000'000'000ULL) {
    PackingCheck out;
    out.min_norm2 = min_norm2(lat, node_budget);
    out.packing = out.min_norm2 >= Rational(4);
    if (!out.packing) {
        ShellQuery q{lat, out.min_norm2, out.min_norm2, ShellMode::collect, true, 1, node_budget};
        ShellSet s = enumerate_shell(q);
        out.witness = s.vectors.front();
    }
    return out;
}

struct KappaCertificate {
    PackingCheck packing;
    Rational lo2{4};
    Rational hi2{0};
    std::uint64_t count = 0;
    std::map<Rational, std::uint64_t> histogram;
    std::optional<std::uint64_t> lemma_bound; // 2(2^n - 1), only when hi2 < 8
    bool bound_respected = true;
};

/// Certificate for card X(alpha, L) with (2+alpha)^2 = hi2: the shell count
/// over [4, hi2] plus the packing verdict and, in the hi2 < 8 regime, the
/// 2(2^n - 1) bound check.
inline KappaCertificate kappa_star_alpha_certificate(const GramLattice& lat, const Rational& hi2,
                                                     int threads = 1,
                                                     std::uint64_t node_budget = 10'000'000'000ULL) {
    KappaCertificate cert;
    cert.packing = is_packing_lattice(lat, node_budget);
    cert.hi2 = hi2;
    ShellQuery q{lat, Rational(4), hi2, ShellMode::count, false, threads, node_budget};
    ShellSet s = enumerate_shell(q);
    cert.count = s.total;
    cert.histogram = s.histogram;
    if (hi2 < Rational(8)) {
        cert.lemma_bound = (std::uint64_t{1} << lat.dim()) * 2 - 2;
        cert.bound_respected = !cert.packing.packing || cert.count <= *cert.lemma_bound;
    }
    return cert;
}

} // namespace kissing
