#include "bankopt/pb_solver.hpp"
#include "bankopt/errors.hpp"
#include "bankopt/reflecting.hpp"

#include <cmath>

namespace bankopt {

PbSolution solve_pb(const ModelParams& p, const DerivedConstants& dc) {
    const auto s = solve_reflecting(p, dc, /*d_repay=*/0.0, /*floor_level=*/0.0,
                                    /*allow_unbounded=*/true);
    PbSolution pb;
    pb.params = p;
    pb.dc = dc;
    pb.z_hat_pb = s.z_hat;
    pb.max_residual = s.max_residual;
    pb.lower = s.lower;
    pb.upper = s.upper;
    if (s.split_at_kink) {
        pb.case_tag = PbCase::Case1;
        pb.B21_pb = s.B21;
        pb.B12_pb = s.B12;
        pb.B22_pb = s.B22;
    } else {
        pb.case_tag = PbCase::Case2;
        pb.B2_pb = s.B2;
    }
    return pb;
}

Jet3 v_pb_eval(double z, const PbSolution& pb) {
    if (!(z > 0.0)) throw DomainError("v_pb_eval: z must be positive");
    if (z >= pb.z_hat_pb) {
        Jet3 j = jet(pb.case_tag == PbCase::Case1 ? pb.upper : pb.lower, pb.z_hat_pb);
        j.d1 = j.d2 = j.d3 = 0.0;
        return j;
    }
    if (pb.case_tag == PbCase::Case1 && z >= pb.dc.y_tilde) return jet(pb.upper, z);
    return jet(pb.lower, z);
}

Jet3 u_stop_eval(double z, const PbSolution& pb) {
    if (!(z > 0.0)) throw DomainError("u_stop_eval: z must be positive");
    const double a = pb.params.alpha;
    const double F = pb.params.F;
    if (z < a * pb.z_hat_pb) {
        Jet3 j = v_pb_eval(z / a, pb);
        j.v -= F * z;
        j.d1 = j.d1 / a - F;
        j.d2 /= a * a;
        j.d3 /= a * a * a;
        return j;
    }
    Jet3 j = v_pb_eval(pb.z_hat_pb, pb);
    j.v -= F * z;
    j.d1 = -F;
    j.d2 = j.d3 = 0.0;
    return j;
}

} // namespace bankopt
