#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twistchain/bethe.hpp"

namespace tc {

// 'e': sinh(x+c)/sinh(x−c); half: sinh((x+c)/2)/sinh((x−c)/2)
struct Kernel {
  bool half = false;
  cplx c;
};

struct Drive {
  double power = 1.0;
  Kernel k;
  cplx shift;
};

struct BetheSystem {
  int n = 1;
  cplx eta;
  std::vector<std::vector<Drive>> drives;
  std::vector<bool> chi;
  std::vector<std::vector<std::optional<Kernel>>> inter;
  std::vector<double> period;
  // equation at this level built from half-angle kernels
  std::vector<bool> half_angle;
  // global iπ shift of all top-level roots is a symmetry
  bool shift_quotient = false;
  bool special = false;
  cplx special_root;
};

BetheSystem build_system(const ChainSpec& spec);

struct Fixed {
  int level;
  cplx u;
};

// Log residual per unknown with imaginary parts wrapped into (−π, π].
void eval_log_system(const BetheSystem& S, const std::vector<cplx>& z, const std::vector<int>& lev,
                     const std::vector<Fixed>& fixed, Vec& F, Mat* J);

std::optional<std::vector<cplx>> newton(const BetheSystem& S, std::vector<cplx> z, const std::vector<int>& lev,
                                        const std::vector<Fixed>& fixed, double tol, int max_iter);

// Rational residual LHS − RHS scaled by max(1, |LHS|, |RHS|).
cplx rational_residual(const BetheSystem& S, const BetheRootSet& r, int level, int k);

double level_period(const BetheSystem& S, int level, int m_level);
cplx fold_root(cplx u, double period);
// a ≡ ±b modulo iP
bool equivalent_roots(cplx a, cplx b, double P, double tol_re, double tol_im);
BetheRootSet canonical_form(const BetheSystem& S, const BetheRootSet& r);
bool singular_root(const BetheSystem& S, int level, cplx u);
bool same_rootset(const BetheSystem& S, const BetheRootSet& a, const BetheRootSet& b, double tol);

}  // namespace tc
