#pragma once

#include "axiscat/common.hpp"

namespace axiscat {

/// Target/source ring pair in the (r,z) half-plane. Normals are optional
/// depending on which kernels are requested.
struct PairGeometry {
    double r = 0, z = 0;      // target ring
    double rp = 0, zp = 0;    // source ring
    double nrp = 0, nzp = 0;  // source normal
    double nr = 0, nz = 0;    // target normal (adjoint kernel only)

    double min_rho() const;  // 3D distance at theta' = 0
};

/// Spec-level pair with the near-singularity indicator.
struct SourceTargetPair {
    PairGeometry geom;
    double source_panel_length = 1.0;

    double separation_ratio() const {
        return geom.min_rho() / source_panel_length;
    }
};

/// Values of the azimuthal integrals for one mode:
///   single = G_m^k = int_0^{2pi} e^{ik rho}/rho e^{-im tau} dtau
///   dbl    = d G_m^k / d nu(source)
/// The source-normal derivative is of e^{ik rho}/rho with respect to the
/// source point, i.e. the integrand carries nu(y).(y - x); the sign follows
/// the combined-field equation validated against the sphere series.
struct ModalKernelPair {
    cplx single{0, 0};
    cplx dbl{0, 0};
};

/// Reusable buffers for kernel evaluation.
struct KernelWorkspace {
    std::vector<cplx> samples;
    std::vector<cplx> scratch;
    std::vector<cplx> acc;
    std::vector<double> scales;
};

struct KernelRequest {
    int m_max = 0;
    bool want_adjoint = false;  // also compute d G_m / d nu(target)
    double tol = 1e-12;         // relative to per-kernel magnitude scales
    // separation_ratio >= this uses the equispaced trapezoid + FFT path;
    // closer pairs use adaptive Gauss-Kronrod in tau.
    double trapezoid_threshold = 0.5;
    double separation_ratio = 0.0;
    int max_depth = 48;
};

/// Computes single[0..m_max], dbl_src[0..m_max] and (optionally)
/// dbl_tgt[0..m_max]. Returns false if the adaptive path failed to converge
/// within max_depth. Throws on coincident points (min rho < 1e-14).
bool eval_modal_kernels(const PairGeometry& g, cplx k, const KernelRequest& req,
                        KernelWorkspace& ws, cplx* single, cplx* dbl_src,
                        cplx* dbl_tgt);

/// Single-mode evaluation (negative m via evenness).
ModalKernelPair modal_green(const SourceTargetPair& pair, int m, cplx k);

/// All modes 0..m_max at once; trapezoid/FFT when well separated, otherwise
/// the graded adaptive path.
std::vector<ModalKernelPair> modal_green_batch(const SourceTargetPair& pair,
                                               int m_max, cplx k);

}  // namespace axiscat
