#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "box_oracle.hpp"
#include "kissing/catalog.hpp"
#include "kissing/shells.hpp"

using kissing::catalog;
using kissing::enumerate_shell;
using kissing::GramLattice;
using kissing::Rational;
using kissing::RationalMatrix;
using kissing::ShellMode;
using kissing::ShellQuery;

namespace {

Rational rat(long p, long q = 1) { return Rational(p, q); }

GramLattice scaled(const char* name, long c2num, long c2den = 1) {
    return kissing::scale(catalog(name).lattice, Rational(c2num, c2den));
}

std::uint64_t count(const GramLattice& l, const Rational& lo2, const Rational& hi2, int threads = 1) {
    ShellQuery q{l, lo2, hi2};
    q.threads = threads;
    return enumerate_shell(q).total;
}

// random unimodular matrix as a short product of elementary operations
RationalMatrix random_unimodular(int n, std::mt19937& rng) {
    RationalMatrix u = RationalMatrix::identity(n);
    std::uniform_int_distribution<int> row(0, n - 1), coef(-2, 2), steps(4, 8);
    const int k = steps(rng);
    for (int s = 0; s < k; ++s) {
        const int i = row(rng);
        int j = row(rng);
        if (i == j) continue;
        const int c = coef(rng);
        for (int t = 0; t < n; ++t) u(i, t) += Rational(c) * u(j, t);
    }
    return u;
}

GramLattice transformed(const GramLattice& l, const RationalMatrix& u) {
    return GramLattice(u * l.gram() * u.transposed(), l.name(), "unimodular image");
}

} // namespace

TEST_CASE("published shell counts") {
    const auto hex = catalog("thm1_opt12").lattice;
    CHECK(count(hex, rat(4), rat(4)) == 6);
    CHECK(count(hex, rat(4), rat(8)) == 6);
    CHECK(count(hex, rat(4), rat(12)) == 12);
    CHECK(count(scaled("z2", 4), rat(4), rat(8)) == 8);
    CHECK(count(catalog("thm2_opt14").lattice, rat(4), rat(16, 3)) == 14);
    CHECK(count(catalog("thm2_opt20").lattice, rat(4), rat(8)) == 20);
    CHECK(count(catalog("remark42_tetra").lattice, rat(4), rat(8)) == 18);
    CHECK(count(catalog("remark42_cubic").lattice, rat(4), rat(8)) == 18);
    CHECK(count(scaled("a4_star", 5), rat(4), rat(6)) == 30);
    CHECK(count(catalog("thm3_opt50").lattice, rat(4), rat(8)) == 50);
    CHECK(count(scaled("d4", 2), rat(4), rat(8)) == 48);
    CHECK(count(catalog("remark71_48").lattice, rat(4), rat(8)) == 48);
    CHECK(count(scaled("a5_star", 24, 5), rat(4), rat(36, 5)) == 62);
}

TEST_CASE("sqrt2 E8 histogram") {
    ShellQuery q{scaled("e8", 2), rat(4), rat(8)};
    const auto s = enumerate_shell(q);
    CHECK(s.total == 2400);
    REQUIRE(s.histogram.size() == 2);
    CHECK(s.histogram.at(rat(4)) == 240);
    CHECK(s.histogram.at(rat(8)) == 2160);
}

TEST_CASE("closed interval keeps both boundary shells") {
    const auto l = scaled("z3", 4); // 2Z^3
    CHECK(count(l, rat(4), rat(4)) == 6);
    CHECK(count(l, rat(4), rat(8)) == 18);
    // shrink either end below/above the boundary and the shell drops out
    CHECK(count(l, rat(4), rat(799, 100)) == 6);
    CHECK(count(l, rat(401, 100), rat(8)) == 12);
}

TEST_CASE("count and collect agree, vectors are centrally symmetric") {
    for (const char* name : {"thm2_opt14", "thm3_opt50"}) {
        ShellQuery qc{catalog(name).lattice, rat(4), rat(8)};
        const auto counted = enumerate_shell(qc);
        qc.mode = ShellMode::collect;
        const auto collected = enumerate_shell(qc);
        CHECK(counted.total == collected.total);
        CHECK(counted.histogram == collected.histogram);
        REQUIRE(collected.vectors.size() == collected.total);
        // v in X <=> -v in X, norms match the histogram
        std::map<std::vector<std::int32_t>, Rational> seen;
        for (const auto& v : collected.vectors) seen.emplace(v.coords, v.norm2);
        for (const auto& [coords, norm] : seen) {
            std::vector<std::int32_t> neg(coords.size());
            for (size_t i = 0; i < coords.size(); ++i) neg[i] = -coords[i];
            REQUIRE(seen.count(neg) == 1);
            CHECK(seen.at(neg) == norm);
            CHECK(catalog(name).lattice.norm2(coords) == norm);
        }
    }
}

TEST_CASE("pairs mode halves every histogram entry") {
    ShellQuery q{scaled("e8", 2), rat(4), rat(8)};
    q.pairs = true;
    const auto s = enumerate_shell(q);
    CHECK(s.total == 1200);
    CHECK(s.histogram.at(rat(4)) == 120);
    CHECK(s.histogram.at(rat(8)) == 1080);
}

TEST_CASE("worker count does not change the result") {
    const auto l = scaled("e6", 2);
    const auto one = count(l, rat(4), rat(8), 1);
    CHECK(one == 342);
    CHECK(count(l, rat(4), rat(8), 3) == one);
    CHECK(count(l, rat(4), rat(8), 8) == one);
}

TEST_CASE("box-scan oracle agrees on catalog lattices") {
    for (const char* name : {"z2", "z3", "a2", "a3", "d3", "d4", "a4_star", "thm2_opt14", "thm3_opt50"}) {
        const auto l = catalog(name).lattice;
        const Rational hi = l.gram()(0, 0) * rat(3);
        ShellQuery q{l, rat(1, 2), hi};
        const auto fast = enumerate_shell(q);
        const auto slow = oracle::box_scan(l, rat(1, 2), hi);
        INFO(name);
        CHECK(fast.total == slow.total);
        CHECK(fast.histogram == slow.histogram);
    }
}

TEST_CASE("counts are invariant under unimodular basis changes") {
    std::mt19937 rng(20250809);
    const char* names[] = {"z2", "a2", "d3", "a3", "d4", "thm3_opt50"};
    int done = 0;
    while (done < 50) {
        const auto entry = catalog(names[done % 6]);
        const auto u = random_unimodular(entry.lattice.dim(), rng);
        const auto img = transformed(entry.lattice, u);
        const Rational hi = entry.expected_min_norm2 * rat(3);
        ShellQuery q{entry.lattice, rat(0), hi};
        ShellQuery qi{img, rat(0), hi};
        const auto base = enumerate_shell(q);
        const auto moved = enumerate_shell(qi);
        CHECK(base.total == moved.total);
        CHECK(base.histogram == moved.histogram);
        // and the oracle agrees with the transformed count
        const auto slow = oracle::box_scan(img, rat(0), hi);
        CHECK(moved.total == slow.total);
        CHECK(moved.histogram == slow.histogram);
        ++done;
    }
}

TEST_CASE("scaling covariance") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<long> num(1, 8), den(1, 8);
    for (const char* name : {"a2", "d3", "a3_star"}) {
        const auto l = catalog(name).lattice;
        const Rational c(num(rng), den(rng));
        const Rational lo = rat(1), hi = rat(9);
        ShellQuery q{l, lo, hi};
        ShellQuery qs{kissing::scale(l, c), lo * c, hi * c};
        CHECK(enumerate_shell(q).total == enumerate_shell(qs).total);
    }
}

TEST_CASE("lemma 2.2 bound below norm^2 8") {
    // packing lattices with hi2 < 8 have at most 2(2^n - 1) shell vectors
    for (const auto& name : kissing::catalog_names()) {
        const auto entry = catalog(name);
        if (entry.lattice.dim() > 6 || name == "leech") continue;
        const auto l = kissing::scale(entry.lattice, rat(4) / entry.expected_min_norm2);
        const std::uint64_t bound = (std::uint64_t{1} << l.dim()) * 2 - 2;
        INFO(name);
        CHECK(count(l, rat(4), rat(799, 100)) <= bound);
    }
}

TEST_CASE("min_norm2 on catalog entries") {
    CHECK(kissing::min_norm2(catalog("e8").lattice) == rat(2));
    CHECK(kissing::min_norm2(scaled("z3", 4)) == rat(4));
    CHECK(kissing::min_norm2(catalog("a5_star").lattice) == rat(5, 6));
}

TEST_CASE("packing verdicts") {
    const auto yes = kissing::is_packing_lattice(scaled("z2", 4));
    CHECK(yes.packing);
    CHECK(yes.min_norm2 == rat(4));
    CHECK_FALSE(yes.witness.has_value());

    const auto yes2 = kissing::is_packing_lattice(scaled("d4", 2));
    CHECK(yes2.packing);
    CHECK(yes2.min_norm2 == rat(4));

    const auto no = kissing::is_packing_lattice(catalog("z2").lattice);
    CHECK_FALSE(no.packing);
    CHECK(no.min_norm2 == rat(1));
    REQUIRE(no.witness.has_value());
    CHECK(no.witness->norm2 == rat(1));
}

TEST_CASE("kappa certificates") {
    const auto c1 = kissing::kappa_star_alpha_certificate(scaled("z2", 4), rat(8));
    CHECK(c1.count == 8);
    CHECK(c1.packing.packing);
    CHECK_FALSE(c1.lemma_bound.has_value()); // hi2 = 8 is outside the bound regime

    const auto c2 = kissing::kappa_star_alpha_certificate(scaled("a4_star", 5), rat(6));
    CHECK(c2.count == 30);
    REQUIRE(c2.lemma_bound.has_value());
    CHECK(*c2.lemma_bound == 30); // 2(2^4 - 1); the count attains the bound
    CHECK(c2.bound_respected);

    const auto c3 = kissing::kappa_star_alpha_certificate(scaled("a5_star", 24, 5), rat(36, 5));
    CHECK(c3.count == 62);
    CHECK(c3.bound_respected);
}

TEST_CASE("node budget refusal carries a diagnostic") {
    ShellQuery q{scaled("e8", 2), rat(4), rat(8)};
    q.node_budget = 50;
    CHECK_THROWS_MATCHES(enumerate_shell(q), kissing::budget_error,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("node budget")));
}

TEST_CASE("invalid queries are rejected") {
    ShellQuery q{catalog("z2").lattice, rat(8), rat(4)};
    CHECK_THROWS_AS(enumerate_shell(q), std::invalid_argument);
    ShellQuery q2{catalog("z2").lattice, rat(-1), rat(4)};
    CHECK_THROWS_AS(enumerate_shell(q2), std::invalid_argument);
}
