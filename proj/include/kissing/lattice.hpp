#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kissing/matrix.hpp"
#include "kissing/rational.hpp"

namespace kissing {

/// A lattice given by the Gram matrix of a basis. Immutable after
/// construction; positive definiteness is checked eagerly.
class GramLattice {
  public:
    GramLattice(RationalMatrix gram, std::string name = {}, std::string scale_note = {})
        : dim_(gram.rows()), gram_(std::move(gram)), name_(std::move(name)), scale_note_(std::move(scale_note)) {
        if (!gram_.is_square()) throw std::invalid_argument("GramLattice: Gram matrix must be square");
        if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("GramLattice: dimension out of range 1..24");
        if (!gram_.is_symmetric()) throw std::invalid_argument("GramLattice: Gram matrix must be symmetric");
        for (int k = 1; k <= dim_; ++k)
            if (gram_.leading_principal_minor(k).sign() <= 0)
                throw std::invalid_argument("GramLattice: Gram matrix is not positive definite (minor " +
                                            std::to_string(k) + ")");
    }

    int dim() const { return dim_; }
    const RationalMatrix& gram() const { return gram_; }
    const std::string& name() const { return name_; }
    const std::string& scale_note() const { return scale_note_; }

    Rational det() const { return gram_.det(); }

    /// z^T G z for an integer coordinate vector.
    template <typename IntVec>
    Rational norm2(const IntVec& z) const {
        Rational s(0);
        for (int i = 0; i < dim_; ++i) {
            if (z[i] == 0) continue;
            Rational row(0);
            for (int j = 0; j < dim_; ++j) {
                if (z[j] == 0) continue;
                row += gram_(i, j) * Rational(static_cast<long>(z[j]));
            }
            s += Rational(static_cast<long>(z[i])) * row;
        }
        return s;
    }

    /// z1^T G z2 for integer coordinate vectors.
    template <typename IntVec>
    Rational inner(const IntVec& z1, const IntVec& z2) const {
        Rational s(0);
        for (int i = 0; i < dim_; ++i) {
            if (z1[i] == 0) continue;
            Rational row(0);
            for (int j = 0; j < dim_; ++j) {
                if (z2[j] == 0) continue;
                row += gram_(i, j) * Rational(static_cast<long>(z2[j]));
            }
            s += Rational(static_cast<long>(z1[i])) * row;
        }
        return s;
    }

  private:
    int dim_;
    RationalMatrix gram_;
    std::string name_;
    std::string scale_note_;
};

/// Scales every vector by sqrt(c2), i.e. multiplies the Gram matrix by c2.
inline GramLattice scale(const GramLattice& l, const Rational& c2) {
    if (c2.sign() <= 0) throw std::domain_error("scale: factor must be positive");
    RationalMatrix g = l.gram();
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g(i, j) *= c2;
    std::string note = l.scale_note();
    if (!note.empty()) note += "; ";
    note += "scaled by c2=" + c2.to_string();
    return GramLattice(std::move(g), l.name(), note);
}

/// Builds a Gram lattice from basis rows whose k-th coordinate is
/// rows[i][k] * sqrt(radicands[k]). Inner products are exactly rational by
/// construction; this is how printed bases with surd coordinates are encoded.
inline GramLattice gram_from_basis(const std::vector<std::vector<Rational>>& rows,
                                   const std::vector<Rational>& radicands, std::string name = {}) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw std::invalid_argument("gram_from_basis: no rows");
    const size_t width = radicands.size();
    for (const auto& r : radicands)
        if (r.sign() < 0) throw std::invalid_argument("gram_from_basis: negative radicand");
    RationalMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        if (rows[i].size() != width) throw std::invalid_argument("gram_from_basis: ragged rows");
        for (int j = i; j < n; ++j) {
            Rational s(0);
            for (size_t k = 0; k < width; ++k) s += rows[i][k] * rows[j][k] * radicands[k];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return GramLattice(std::move(g), std::move(name), "built from basis rows");
}

} // namespace kissing
