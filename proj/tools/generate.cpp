#include "generate.hpp"

#include <random>
#include <sstream>

#include "nra/frontend.hpp"

namespace nra::tools {

namespace {

Polynomial random_poly(std::mt19937_64& rng, const std::vector<Var>& vars) {
  std::uniform_int_distribution<int> coef(-4, 4), terms(1, 4), pick(0, static_cast<int>(vars.size()) - 1),
      deg(0, 3);
  Polynomial p(coef(rng));
  for (int t = terms(rng); t > 0; --t) {
    Polynomial m(coef(rng));
    int budget = deg(rng);
    while (budget-- > 0) m *= Polynomial::variable(vars[pick(rng)]);
    p += m;
  }
  return p;
}

Formula random_side(std::mt19937_64& rng, const std::vector<Var>& vars) {
  std::uniform_int_distribution<int> count(1, 3), rel(0, 4), coin(0, 3);
  std::vector<Formula> fs;
  for (int i = count(rng); i > 0; --i) {
    Formula f = Formula::constraint(random_poly(rng, vars), static_cast<Rel>(rel(rng)));
    if (coin(rng) == 0) f = f || Formula::constraint(random_poly(rng, vars), static_cast<Rel>(rel(rng)));
    fs.push_back(f);
  }
  return Formula::conjunction(std::move(fs));
}

}  // namespace

std::string random_interpolation_script(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VarTable vars;
  Var x = vars.declare("x", Sort::Real), y = vars.declare("y", Sort::Real);
  Var z = vars.declare("z", Sort::Real), w = vars.declare("w", Sort::Real);
  Formula a = random_side(rng, {x, y, z});
  Formula b = random_side(rng, {x, y, w});
  std::ostringstream out;
  out << "; seed " << seed << "\n";
  for (const char* v : {"x", "y", "z", "w"}) out << "(declare-const " << v << " Real)\n";
  out << "(assert-A " << print_term(a, vars) << ")\n";
  out << "(assert-B " << print_term(b, vars) << ")\n";
  out << "(compute-interpolant)\n";
  return out.str();
}

}  // namespace nra::tools
