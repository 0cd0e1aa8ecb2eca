#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kissing/data.hpp"
#include "kissing/errors.hpp"
#include "kissing/matrix.hpp"

namespace kissing {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 scale(const Vec3& a, double c) { return {a[0] * c, a[1] * c, a[2] * c}; }

/// n . x <= b with |n| = 1 and b > 0 (origin strictly interior).
struct Halfspace {
    Vec3 n;
    double b;
};

inline constexpr double kGeomTol = 1e-9;

/// Origin-symmetric-or-not 3-D convex body with both representations
/// available. All geometry is double precision with 1e-9 tolerances.
struct Polytope3 {
    std::string name;
    std::vector<Halfspace> halfspaces; // normalized, deduplicated
    std::vector<Vec3> vertices;        // deduplicated
    bool symmetric = false;

    double vertex_violation(const Vec3& v) const {
        double worst = 0;
        for (const auto& h : halfspaces) worst = std::max(worst, dot(h.n, v) - h.b);
        return worst;
    }
};

namespace detail {

inline std::vector<Halfspace> normalize_halfspaces(const std::vector<Halfspace>& raw) {
    std::vector<Halfspace> out;
    for (const auto& h : raw) {
        const double len = norm(h.n);
        if (len < kGeomTol) throw std::invalid_argument("polytope: zero normal");
        Halfspace nh{scale(h.n, 1.0 / len), h.b / len};
        if (nh.b <= kGeomTol) throw std::invalid_argument("polytope: origin not strictly interior");
        bool dup = false;
        for (const auto& o : out)
            if (norm(sub(o.n, nh.n)) < kGeomTol && std::abs(o.b - nh.b) < kGeomTol) { dup = true; break; }
        if (!dup) out.push_back(nh);
    }
    return out;
}

inline void dedupe_push(std::vector<Vec3>& verts, const Vec3& v) {
    for (const auto& w : verts)
        if (norm(sub(w, v)) < kGeomTol) return;
    verts.push_back(v);
}

inline bool negation_closed(const std::vector<Halfspace>& hs) {
    for (const auto& h : hs) {
        bool found = false;
        for (const auto& o : hs)
            if (norm(sub(o.n, scale(h.n, -1.0))) < kGeomTol && std::abs(o.b - h.b) < kGeomTol) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

} // namespace detail

/// H-representation build: vertices from all feasible facet triples.
inline Polytope3 build_from_halfspaces(std::vector<Halfspace> raw, std::string name = {}) {
    Polytope3 p;
    p.name = std::move(name);
    p.halfspaces = detail::normalize_halfspaces(raw);
    const size_t m = p.halfspaces.size();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            for (size_t k = j + 1; k < m; ++k) {
                const auto& a = p.halfspaces[i];
                const auto& b = p.halfspaces[j];
                const auto& c = p.halfspaces[k];
                auto sol = solve3({{{a.n[0], a.n[1], a.n[2]}, {b.n[0], b.n[1], b.n[2]}, {c.n[0], c.n[1], c.n[2]}}},
                                  {a.b, b.b, c.b});
                if (!sol) continue;
                const Vec3 v{(*sol)[0], (*sol)[1], (*sol)[2]};
                if (p.vertex_violation(v) <= kGeomTol) detail::dedupe_push(p.vertices, v);
            }
        }
    }
    if (p.vertices.size() < 4) throw std::invalid_argument("polytope: halfspaces do not bound a 3-D body");
    // a facet of a bounded body carries at least 3 vertices
    bool any_facet = false;
    for (const auto& h : p.halfspaces) {
        int onplane = 0;
        for (const auto& v : p.vertices)
            if (std::abs(dot(h.n, v) - h.b) < kGeomTol) ++onplane;
        if (onplane >= 3) any_facet = true;
    }
    if (!any_facet) throw std::invalid_argument("polytope: unbounded or degenerate halfspace system");
    p.symmetric = detail::negation_closed(p.halfspaces);
    return p;
}

/// V-representation build: supporting planes from all vertex triples.
inline Polytope3 build_from_vertices(std::vector<Vec3> raw, std::string name = {}) {
    Polytope3 p;
    p.name = std::move(name);
    for (const auto& v : raw) detail::dedupe_push(p.vertices, v);
    const size_t m = p.vertices.size();
    if (m < 4) throw std::invalid_argument("polytope: need at least 4 vertices");
    std::vector<Halfspace> found;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            for (size_t k = j + 1; k < m; ++k) {
                Vec3 n = cross(sub(p.vertices[j], p.vertices[i]), sub(p.vertices[k], p.vertices[i]));
                const double len = norm(n);
                if (len < kGeomTol) continue;
                n = scale(n, 1.0 / len);
                double b = dot(n, p.vertices[i]);
                if (std::abs(b) < kGeomTol) continue; // origin would sit on the plane
                if (b < 0) {
                    n = scale(n, -1.0);
                    b = -b;
                }
                bool supporting = true;
                for (const auto& v : p.vertices)
                    if (dot(n, v) > b + kGeomTol) { supporting = false; break; }
                if (!supporting) continue;
                bool dup = false;
                for (const auto& o : found)
                    if (norm(sub(o.n, n)) < kGeomTol && std::abs(o.b - b) < kGeomTol) { dup = true; break; }
                if (!dup) found.push_back({n, b});
            }
        }
    }
    if (found.empty()) throw std::invalid_argument("polytope: vertices are degenerate");
    p.halfspaces = found;
    p.symmetric = detail::negation_closed(p.halfspaces);
    return p;
}

struct RadiiWitness {
    double r_in = 0, r_out = 0;
    Vec3 outer_vertex{};   // attains the circumradius
    Halfspace inner_facet{}; // attains the inradius
};

/// r_out = max vertex norm; r_in = min facet distance over non-redundant
/// facets (>= 3 incident vertices).
inline RadiiWitness radii(const Polytope3& p) {
    RadiiWitness r;
    for (const auto& v : p.vertices) {
        const double d = norm(v);
        if (d > r.r_out) {
            r.r_out = d;
            r.outer_vertex = v;
        }
    }
    bool have = false;
    for (const auto& h : p.halfspaces) {
        int onplane = 0;
        for (const auto& v : p.vertices)
            if (std::abs(dot(h.n, v) - h.b) < kGeomTol) ++onplane;
        if (onplane < 3) continue;
        if (!have || h.b < r.r_in) {
            r.r_in = h.b;
            r.inner_facet = h;
            have = true;
        }
    }
    if (!have) throw integrity_error("radii: no non-redundant facet found");
    return r;
}

enum class SandwichVerdict { kissing12, inconclusive };

/// Sandwich certificate: after scaling by 1/r_in the body satisfies
/// B^3 subset C subset int((r_out/r_in) B^3); when that ratio is below
/// 2 sqrt(3)/3 the lattice kissing number is certified to be 12.
struct SandwichCertificate {
    std::string body;
    double r_in = 0, r_out = 0, ratio = 0;
    double threshold = 2.0 / std::numbers::sqrt3;
    double margin = 1e-9;
    SandwichVerdict verdict = SandwichVerdict::inconclusive;
    Vec3 witness_vertex{};
    Halfspace witness_facet{};
    // the doubled body 2C obeys the same sandwich against (4/3) sqrt(3) B^3;
    // the threshold here is the body form, not the doubled display form
    std::string note = "threshold 2*sqrt(3)/3 applies to C; the doubled form 4*sqrt(3)/3 applies to 2C";
};

inline SandwichCertificate theorem51_verdict(const Polytope3& p, double margin = 1e-9) {
    if (!p.symmetric) throw std::domain_error("theorem51_verdict: body must be origin-symmetric");
    const RadiiWitness r = radii(p);
    SandwichCertificate c;
    c.body = p.name;
    c.r_in = r.r_in;
    c.r_out = r.r_out;
    c.ratio = r.r_out / r.r_in;
    c.margin = margin;
    c.witness_vertex = r.outer_vertex;
    c.witness_facet = r.inner_facet;
    c.verdict = (c.ratio < c.threshold - margin) ? SandwichVerdict::kissing12 : SandwichVerdict::inconclusive;
    return c;
}

/// L_p unit ball family: ratio 3^{|1/2 - 1/p|}; certified on the open
/// interval ln3/ln2 < p < ln3/(ln3 - ln2), endpoints excluded.
inline SandwichCertificate lp_ball_verdict(double p) {
    if (!(p > 1.0)) throw std::domain_error("lp_ball_verdict: requires p > 1");
    static const double lo = std::log(3.0) / std::log(2.0);
    static const double hi = std::log(3.0) / (std::log(3.0) - std::log(2.0));
    SandwichCertificate c;
    c.body = "B_p^3(p=" + std::to_string(p) + ")";
    const double t = std::pow(3.0, std::abs(0.5 - 1.0 / p));
    c.ratio = t;
    if (p >= 2.0) {
        c.r_in = 1.0;
        c.r_out = t;
    } else {
        c.r_out = 1.0;
        c.r_in = 1.0 / t;
    }
    c.verdict = (p > lo && p < hi) ? SandwichVerdict::kissing12 : SandwichVerdict::inconclusive;
    return c;
}

struct LpBoundaryReport {
    std::uint64_t boundary_count = 0;       // lattice vectors with ||v||_p = 2
    bool packing_ok = false;                // no nonzero vector with ||v||_p < 2
    std::vector<std::array<int, 3>> shorter; // violations, if any
};

/// Fixed instance at p = log2(3), lattice generated by (2,0,0), (0,2,0),
/// (1,1,1). With 2^p = 3 the boundary test |v1|^p+|v2|^p+|v3|^p = 3 is
/// decidable in integers: 0^p=0, 1^p=1, 2^p=3 and any |v_i|>=3 overshoots.
inline LpBoundaryReport remark51_count() {
    LpBoundaryReport rep;
    auto term = [](int a) -> std::optional<int> {
        a = std::abs(a);
        if (a == 0) return 0;
        if (a == 1) return 1;
        if (a == 2) return 3;
        return std::nullopt; // 3^p = 3^(log2 3) > 3 already overshoots
    };
    for (int z1 = -3; z1 <= 3; ++z1) {
        for (int z2 = -3; z2 <= 3; ++z2) {
            for (int z3 = -3; z3 <= 3; ++z3) {
                if (!z1 && !z2 && !z3) continue;
                const std::array<int, 3> v{2 * z1 + z3, 2 * z2 + z3, z3};
                const auto t1 = term(v[0]);
                const auto t2 = term(v[1]);
                const auto t3 = term(v[2]);
                if (!t1 || !t2 || !t3) continue; // ||v||_p > 2 for sure
                const int s = *t1 + *t2 + *t3;
                if (s == 3) ++rep.boundary_count;
                if (s < 3) rep.shorter.push_back(v);
            }
        }
    }
    rep.packing_ok = rep.shorter.empty();
    return rep;
}

namespace detail {

inline double num_field(const nlohmann::json& j) {
    if (j.is_string()) return std::stod(j.get<std::string>());
    return j.get<double>();
}

// raw halfspaces of a file, before building (so compositions can be scaled)
inline std::vector<Halfspace> raw_halfspaces(const std::filesystem::path& path);

inline std::filesystem::path polytope_path(const std::string& name) {
    namespace fs = std::filesystem;
    if (fs::exists(name) && fs::is_regular_file(name)) return name;
    const fs::path p = data_dir() / "polytopes" / (name + ".json");
    if (!fs::exists(p)) throw data_error("unknown polytope '" + name + "'");
    return p;
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open polytope file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

inline std::vector<Halfspace> raw_halfspaces(const std::filesystem::path& path) {
    const nlohmann::json j = read_json(path);
    std::vector<Halfspace> hs;
    if (j.contains("hrep")) {
        for (const auto& row : j.at("hrep")) {
            if (row.size() != 4) throw data_error("hrep rows must be [nx,ny,nz,b] in " + path.string());
            hs.push_back({{num_field(row[0]), num_field(row[1]), num_field(row[2])}, num_field(row[3])});
        }
        return hs;
    }
    if (j.contains("compose")) {
        for (const auto& part : j.at("compose")) {
            const double c = num_field(part.at("scale"));
            if (!(c > 0)) throw data_error("compose scale must be positive in " + path.string());
            for (const auto& h : raw_halfspaces(polytope_path(part.at("base").get<std::string>())))
                hs.push_back({h.n, h.b * c});
        }
        return hs;
    }
    throw data_error("polytope file has no hrep/compose: " + path.string());
}

} // namespace detail

/// Loads a polytope JSON file: {"hrep": [[nx,ny,nz,b],...]} or
/// {"vrep": [[x,y,z],...]} with decimal strings of >= 17 significant digits;
/// "compose" intersects scaled named bodies; "symmetrize": true unions the
/// antipodal vertex copy before building (for chiral vertex data).
inline Polytope3 load_polytope_file(const std::filesystem::path& path) {
    const nlohmann::json j = detail::read_json(path);
    const std::string name = j.value("name", path.stem().string());
    if (j.contains("vrep")) {
        std::vector<Vec3> verts;
        for (const auto& row : j.at("vrep")) {
            if (row.size() != 3) throw data_error("vrep rows must be [x,y,z] in " + path.string());
            verts.push_back({detail::num_field(row[0]), detail::num_field(row[1]), detail::num_field(row[2])});
        }
        if (j.value("symmetrize", false)) {
            const size_t m = verts.size();
            for (size_t i = 0; i < m; ++i) verts.push_back(scale(verts[i], -1.0));
        }
        return build_from_vertices(std::move(verts), name);
    }
    return build_from_halfspaces(detail::raw_halfspaces(path), name);
}

inline Polytope3 load_polytope(const std::string& name_or_path) {
    return load_polytope_file(detail::polytope_path(name_or_path));
}

} // namespace kissing
