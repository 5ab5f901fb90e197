#pragma once

#include <cstddef>
#include <string>

#include "kron/rat_matrix.hpp"

namespace kron {

/// Block sizes of the phase space R^s_u x T^{s+2k}_phi x R^l_p x R^l_q.
/// Coordinates are always ordered (u, phi, p, q).
struct Dims {
    int s = 1;
    int k = 0;
    int l = 0;

    int dof() const { return s + k + l; }          // N
    int torus_dim() const { return s + 2 * k; }    // n
    int phase_dim() const { return 2 * dof(); }

    int u_offset() const { return 0; }
    int phi_offset() const { return s; }
    int p_offset() const { return s + torus_dim(); }
    int q_offset() const { return s + torus_dim() + l; }

    bool operator==(const Dims&) const = default;
};

/// The data that determines the structure matrix: an (s+2k) x s block Z of
/// full column rank and a skew-symmetric (s+2k) x (s+2k) block L.
struct StructureSpec {
    Dims dims;
    RatMatrix Z;
    RatMatrix L;
};

/// Simplest valid blocks: Z carries an s x s identity (top rows for k = 0,
/// bottom rows otherwise) and L is zero except for a canonical non-singular
/// 2k x 2k corner, which keeps J invertible for k >= 1.
StructureSpec default_structure_spec(const Dims& dims);

/// Structure matrix J of the Poisson brackets and its inverse W, the matrix
/// of the symplectic form. Both exact.
struct StructureMatrix {
    Dims dims;
    RatMatrix J;
    RatMatrix W;

    /// True when the phi-phi block of W vanishes, which happens exactly for
    /// k = 0; on the line phase space this is exactness of the symplectic
    /// form (fully periodic phase spaces never carry exact forms).
    bool form_is_exact() const;
};

enum class TorusKind {
    Lagrangian,
    StrictlyIsotropic,
    StrictlyCoisotropic,
    Atropic,
};

const char* torus_kind_name(TorusKind k);

struct TorusClass {
    TorusKind kind;
    int intersection_dim;  // dim(T intersect T^perp)

    bool operator==(const TorusClass&) const = default;
};

/// Builds J from the block layout, validates every invariant, and inverts it
/// exactly. Throws Error with code RankDeficientZ, NotSkew or SingularJ.
StructureMatrix assemble_structure(const StructureSpec& spec);

/// Basis (as columns) of the skew-orthogonal complement T^perp of the tangent
/// space of a torus {u, p, q fixed}; T is spanned by the phi directions.
RatMatrix torus_tangent_complement(const StructureMatrix& structure);

/// Classification by the exact subspace inclusions T <= T^perp and
/// T^perp <= T, not by (k, l) shortcuts.
TorusClass classify_torus(const StructureMatrix& structure);

}  // namespace kron
