#include "kron/structure.hpp"

#include "kron/errors.hpp"

namespace kron {

StructureSpec default_structure_spec(const Dims& dims) {
    int s = dims.s, k = dims.k;
    int n = dims.torus_dim();
    StructureSpec spec;
    spec.dims = dims;
    spec.Z = RatMatrix::zero(n, s);
    if (k == 0) {
        spec.Z.set_block(0, 0, RatMatrix::identity(s));
    } else {
        spec.Z.set_block(2 * k, 0, RatMatrix::identity(s));
    }
    spec.L = RatMatrix::zero(n, n);
    if (k >= 1) {
        // L_sharp = [[0, -I_k], [I_k, 0]] in the leading 2k x 2k corner.
        for (int i = 0; i < k; ++i) {
            spec.L.at(i, k + i) = -1;
            spec.L.at(k + i, i) = 1;
        }
    }
    return spec;
}

bool StructureMatrix::form_is_exact() const {
    int n = dims.torus_dim();
    return W.block(dims.phi_offset(), dims.phi_offset(), n, n).is_zero();
}

const char* torus_kind_name(TorusKind k) {
    switch (k) {
        case TorusKind::Lagrangian: return "lagrangian";
        case TorusKind::StrictlyIsotropic: return "strictly-isotropic";
        case TorusKind::StrictlyCoisotropic: return "strictly-coisotropic";
        case TorusKind::Atropic: return "atropic";
    }
    return "?";
}

StructureMatrix assemble_structure(const StructureSpec& spec) {
    const Dims& d = spec.dims;
    if (d.s < 0 || d.k < 0 || d.l < 0) {
        throw Error(ErrorCode::BadDocument, "negative dimension in structure spec");
    }
    const std::size_t s = static_cast<std::size_t>(d.s);
    const std::size_t n = static_cast<std::size_t>(d.torus_dim());
    const std::size_t l = static_cast<std::size_t>(d.l);
    const std::size_t dim = static_cast<std::size_t>(d.phase_dim());

    if (spec.Z.rows() != n || spec.Z.cols() != s) {
        throw Error(ErrorCode::BadDocument, "Z has the wrong shape");
    }
    if (spec.L.rows() != n || spec.L.cols() != n) {
        throw Error(ErrorCode::BadDocument, "L has the wrong shape");
    }
    if (spec.Z.rank() != s) {
        throw Error(ErrorCode::RankDeficientZ, "Z must have full column rank s");
    }
    if (!spec.L.is_skew_symmetric()) {
        throw Error(ErrorCode::NotSkew, "L must be skew-symmetric");
    }

    RatMatrix J = RatMatrix::zero(dim, dim);
    J.set_block(0, s, -spec.Z.transpose());
    J.set_block(s, 0, spec.Z);
    J.set_block(s, s, spec.L);
    for (std::size_t i = 0; i < l; ++i) {
        J.at(s + n + i, s + n + l + i) = -1;
        J.at(s + n + l + i, s + n + i) = 1;
    }

    if (J.determinant() == 0) {
        // Only reachable for k >= 1; det J = (det Z)^2 != 0 when k = 0.
        throw Error(ErrorCode::SingularJ, "structure matrix is singular for this L");
    }

    StructureMatrix out;
    out.dims = d;
    out.J = J;
    out.W = J.inverse();
    return out;
}

RatMatrix torus_tangent_complement(const StructureMatrix& structure) {
    const Dims& d = structure.dims;
    const std::size_t n = static_cast<std::size_t>(d.torus_dim());
    const std::size_t dim = static_cast<std::size_t>(d.phase_dim());

    // v lies in T^perp iff v^T W t = 0 for t in T = span of the phi
    // directions, i.e. v is Euclidean-orthogonal to the phi columns of W.
    RatMatrix constraints(n, dim);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t r = 0; r < dim; ++r) {
            constraints.at(a, r) = structure.W.at(r, d.phi_offset() + a);
        }
    }
    return constraints.nullspace();
}

TorusClass classify_torus(const StructureMatrix& structure) {
    const Dims& d = structure.dims;
    const std::size_t n = static_cast<std::size_t>(d.torus_dim());
    const std::size_t dim = static_cast<std::size_t>(d.phase_dim());

    RatMatrix tangent = RatMatrix::zero(dim, n);
    for (std::size_t a = 0; a < n; ++a) tangent.at(d.phi_offset() + a, a) = 1;

    RatMatrix complement = torus_tangent_complement(structure);

    bool isotropic = complement.column_space_contains(tangent);
    bool coisotropic = tangent.column_space_contains(complement);

    std::size_t dim_t = tangent.rank();
    std::size_t dim_c = complement.rank();
    std::size_t dim_sum = joint_column_rank(tangent, complement);
    int intersection = static_cast<int>(dim_t + dim_c - dim_sum);

    TorusKind kind;
    if (isotropic && coisotropic) {
        kind = TorusKind::Lagrangian;
    } else if (isotropic) {
        kind = TorusKind::StrictlyIsotropic;
    } else if (coisotropic) {
        kind = TorusKind::StrictlyCoisotropic;
    } else {
        kind = TorusKind::Atropic;
    }
    return TorusClass{kind, intersection};
}

}  // namespace kron
