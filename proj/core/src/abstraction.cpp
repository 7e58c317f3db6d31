#include "pdfa/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdfa {

Abstraction Abstraction::from_partition(std::string name,
                                        std::vector<std::size_t> class_of,
                                        std::vector<std::string> class_names) {
  Abstraction abs;
  abs.name = std::move(name);
  abs.source_size = class_of.size();
  abs.class_of = std::move(class_of);
  abs.class_names = std::move(class_names);
  std::vector<std::size_t> sizes(abs.class_names.size(), 0);
  for (std::size_t c : abs.class_of) {
    if (c >= abs.class_names.size())
      throw InputError("class id out of range: not a partition");
    ++sizes[c];
  }
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] == 0)
      throw InputError("class '" + abs.class_names[c] +
                       "' is empty: not a partition");
  abs.a = classification_matrix(abs.class_of, abs.class_names.size());
  abs.a_dagger = pseudo_inverse(abs.a);
  return abs;
}

Abstraction Abstraction::identity(std::size_t n) {
  std::vector<std::size_t> class_of(n);
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    class_of[i] = i;
    names[i] = std::to_string(i);
  }
  return from_partition("id", std::move(class_of), std::move(names));
}

Abstraction Abstraction::forgetful(std::size_t n) {
  return from_partition("forgetful", std::vector<std::size_t>(n, 0), {"*"});
}

Abstraction Abstraction::parity(std::size_t n) {
  if (n < 2) throw InputError("parity needs at least the values 0 and 1");
  std::vector<std::size_t> class_of(n);
  for (std::size_t i = 0; i < n; ++i) class_of[i] = i % 2 == 0 ? 0 : 1;
  return from_partition("parity", std::move(class_of), {"even", "odd"});
}

Abstraction Abstraction::primality(std::size_t n) {
  if (n < 3) throw InputError("primality needs a range containing 2");
  std::vector<std::size_t> class_of(n);
  for (std::size_t i = 0; i < n; ++i)
    class_of[i] = is_prime(static_cast<long long>(i)) ? 0 : 1;
  return from_partition("primality", std::move(class_of),
                        {"prime", "nonprime"});
}

Abstraction Abstraction::compose(const Abstraction& x, const Abstraction& y) {
  Abstraction abs;
  abs.name = x.name + (x.name.empty() || y.name.empty() ? "" : "(x)") + y.name;
  abs.source_size = x.source_size * y.source_size;
  abs.class_of.resize(abs.source_size);
  for (std::size_t i = 0; i < x.source_size; ++i)
    for (std::size_t j = 0; j < y.source_size; ++j)
      abs.class_of[i * y.source_size + j] =
          x.class_of[i] * y.classes() + y.class_of[j];
  for (const auto& cx : x.class_names)
    for (const auto& cy : y.class_names)
      abs.class_names.push_back(cx == "*" && cy == "*" ? "*"
                                                       : cx + "," + cy);
  abs.a = kron(x.a, y.a);
  // The pseudo-inverse of a Kronecker product of classification matrices
  // is the product of the pseudo-inverses.
  abs.a_dagger = kron(x.a_dagger, y.a_dagger);
  return abs;
}

Abstraction parse_abstraction_spec(const std::string& spec,
                                   const StateSpace& ss) {
  std::vector<Abstraction> per_var;
  for (std::size_t i = 0; i < ss.var_count(); ++i)
    per_var.push_back(Abstraction::identity(
        static_cast<std::size_t>(ss.decls().at(i).size)));

  if (!spec.empty() && spec != "id") {
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw InputError("bad abstraction item '" + item +
                         "' (want kind:var)");
      std::string kind = item.substr(0, colon);
      std::string var = item.substr(colon + 1);
      std::size_t v = ss.decls().index_of(var);
      auto n = static_cast<std::size_t>(ss.decls().at(v).size);
      if (kind == "forgetful")
        per_var[v] = Abstraction::forgetful(n);
      else if (kind == "parity")
        per_var[v] = Abstraction::parity(n);
      else if (kind == "prime")
        per_var[v] = Abstraction::primality(n);
      else if (kind == "id")
        per_var[v] = Abstraction::identity(n);
      else
        throw InputError("unknown abstraction kind '" + kind + "'");
    }
  }

  Abstraction abs = per_var[0];
  for (std::size_t i = 1; i < per_var.size(); ++i)
    abs = Abstraction::compose(abs, per_var[i]);
  abs.name = spec.empty() ? "id" : spec;
  return abs;
}

ProbVector lift_distribution(const ProbVector& rho, const Abstraction& abs) {
  if (rho.dim() != abs.source_size)
    throw InputError("distribution does not match the abstraction source");
  ProbVector out(abs.classes());
  for (std::size_t i = 0; i < rho.dim(); ++i)
    out[abs.class_of[i]] += rho[i];
  return out;
}

DenseMatrix abstract_test_diag(const std::vector<double>& diag,
                               const Abstraction& abs) {
  if (diag.size() != abs.source_size)
    throw InputError("test diagonal does not match the abstraction source");
  // (a^+ diag(d) a)[j,k] = sum_{i in class j  and  class(i)=k} d_i / |class j|
  // which collapses to a per-class pair accumulation.
  std::vector<double> class_size(abs.classes(), 0.0);
  for (std::size_t c : abs.class_of) class_size[c] += 1.0;
  DenseMatrix m(abs.classes(), abs.classes());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    std::size_t c = abs.class_of[i];
    m.at(c, c) += diag[i] / class_size[c];
  }
  return m;
}

DenseMatrix abstract_test(const BExpr& b, const Abstraction& abs,
                          const StateSpace& ss) {
  if (ss.size() != abs.source_size)
    throw InputError("abstraction does not match the state space");
  return abstract_test_diag(test_diagonal(b, ss), abs);
}

DenseMatrix lifted_block_matrix(const BlockInfo& block, const StateSpace& ss,
                                const Abstraction& abs) {
  if (ss.size() != abs.source_size)
    throw InputError("abstraction does not match the state space");
  const std::size_t n = ss.size();
  std::vector<double> class_size(abs.classes(), 0.0);
  for (std::size_t c : abs.class_of) class_size[c] += 1.0;
  DenseMatrix m(abs.classes(), abs.classes());

  auto add_update = [&](std::size_t from, std::size_t to, double p) {
    std::size_t cf = abs.class_of[from];
    m.at(cf, abs.class_of[to]) += p / class_size[cf];
  };

  switch (block.kind) {
    case BlockKind::Skip:
      for (std::size_t i = 0; i < n; ++i) add_update(i, i, 1.0);
      break;
    case BlockKind::Assign: {
      std::size_t v = ss.decls().index_of(block.var);
      long long range = ss.decls().at(v).size;
      for (std::size_t i = 0; i < n; ++i) {
        StateTuple s = ss.state(i);
        s[v] = reduce_to_range(eval_expr(*block.expr, s, ss), range);
        add_update(i, ss.index(s), 1.0);
      }
      break;
    }
    case BlockKind::Random: {
      std::size_t v = ss.decls().index_of(block.var);
      for (std::size_t i = 0; i < n; ++i) {
        StateTuple s = ss.state(i);
        for (auto& [value, p] : block.dist.entries) {
          s[v] = value;
          add_update(i, ss.index(s), p);
        }
      }
      break;
    }
    case BlockKind::Test:
      throw InputError("tests have projections, not transfer matrices");
  }
  return m;
}

double compatibility_residual(const ProbVector& rho, const BExpr& b,
                              const Abstraction& abs, const StateSpace& ss) {
  std::vector<double> d = test_diagonal(b, ss);
  ProbVector filtered(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) filtered[i] = rho[i] * d[i];
  ProbVector lhs = lift_distribution(filtered, abs);
  ProbVector rhs = lift_distribution(rho, abs) * abstract_test_diag(d, abs);
  return lhs.max_abs_diff(rhs);
}

QualityTable quality_table(std::size_t n) {
  if (n < 3) throw InputError("quality table needs n >= 3");
  Abstraction parity = Abstraction::parity(n);
  Abstraction primality = Abstraction::primality(n);
  std::vector<double> prime_diag(n, 0.0), even_diag(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_prime(static_cast<long long>(i))) prime_diag[i] = 1.0;
    if (i % 2 == 0) even_diag[i] = 1.0;
  }
  auto complement = [](const std::vector<double>& d) {
    std::vector<double> c(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) c[i] = 1.0 - d[i];
    return c;
  };
  QualityTable t;
  t.n = n;
  t.parity_prime = abstract_test_diag(prime_diag, parity);
  t.parity_nonprime = abstract_test_diag(complement(prime_diag), parity);
  t.primality_even = abstract_test_diag(even_diag, primality);
  t.primality_odd = abstract_test_diag(complement(even_diag), primality);
  return t;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace pdfa
