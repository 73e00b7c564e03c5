#include <pnuc/groups.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace pnuc {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> mult) {
  const int n = static_cast<int>(mult.size());
  if (n < 1) throw DomainError("group table must be nonempty");
  for (const auto& row : mult) {
    if (static_cast<int>(row.size()) != n) throw DomainError("group table must be square");
    std::vector<bool> seen(n, false);
    for (int v : row) {
      if (v < 0 || v >= n) throw DomainError("group table entry out of range");
      if (seen[v]) throw DomainError("group table row is not a permutation");
      seen[v] = true;
    }
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int s = 0; s < n && ok; ++s) ok = mult[a][s] == s && mult[s][a] == s;
    if (ok) e = a;
  }
  if (e < 0) throw DomainError("group table has no identity");

  const auto assoc = [&](int a, int b, int c) { return mult[mult[a][b]][c] == mult[a][mult[b][c]]; };
  if (n <= 24) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!assoc(a, b, c)) throw DomainError("group table is not associative");
  } else {
    Rng rng(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < 20000; ++k) {
      const int a = pick(rng), b = pick(rng), c = pick(rng);
      if (!assoc(a, b, c)) throw DomainError("group table is not associative");
    }
  }

  FiniteGroup g;
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mult[a][b] == e && mult[b][a] == e) {
        g.inverse_[a] = b;
        break;
      }
    if (g.inverse_[a] < 0) throw DomainError("group table element without two-sided inverse");
  }
  g.mult_ = std::move(mult);
  g.identity_ = e;
  g.label_ = "table:" + std::to_string(n);
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw DomainError("cyclic group order must be positive");
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mult[a][b] = (a + b) % n;
  FiniteGroup g = from_table(std::move(mult));
  g.label_ = "cyclic:" + std::to_string(n);
  g.cyclic_ = true;
  return g;
}

FiniteGroup FiniteGroup::dihedral(int n) {
  if (n < 1) throw DomainError("dihedral group parameter must be positive");
  const int m = 2 * n;
  std::vector<std::vector<int>> mult(m, std::vector<int>(m));
  const auto mod = [n](int k) { return ((k % n) + n) % n; };
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      const bool xs = x >= n, ys = y >= n;
      const int a = x % n, b = y % n;
      if (!xs && !ys) mult[x][y] = mod(a + b);
      else if (!xs && ys) mult[x][y] = n + mod(b - a);
      else if (xs && !ys) mult[x][y] = n + mod(a + b);
      else mult[x][y] = mod(b - a);
    }
  FiniteGroup g = from_table(std::move(mult));
  g.label_ = "dihedral:" + std::to_string(n);
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> mult(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y)
      mult[x][y] = a.multiply(x / nb, y / nb) * nb + b.multiply(x % nb, y % nb);
  FiniteGroup g = from_table(std::move(mult));
  g.label_ = a.label() + "x" + b.label();
  return g;
}

Group Group::finite(FiniteGroup g) {
  Group out;
  out.finite_ = std::move(g);
  return out;
}

Group Group::integers(int window_radius) {
  if (window_radius < 0) throw DomainError("window radius must be nonnegative");
  Group out;
  out.radius_ = window_radius;
  return out;
}

const FiniteGroup& Group::finite_group() const {
  if (!finite_) throw DomainError("group is not finite");
  return *finite_;
}

Element Group::identity() const { return finite_ ? finite_->identity() : 0; }

Element Group::multiply(Element a, Element b) const {
  return finite_ ? finite_->multiply(static_cast<int>(a), static_cast<int>(b)) : a + b;
}

Element Group::inverse(Element a) const { return finite_ ? finite_->inverse(static_cast<int>(a)) : -a; }

bool Group::contains(Element a) const { return !finite_ || (a >= 0 && a < finite_->order()); }

std::optional<int> Group::order() const {
  if (finite_) return finite_->order();
  return std::nullopt;
}

std::string Group::label() const { return finite_ ? finite_->label() : "integers"; }

FolnerSet::FolnerSet(Group g, std::vector<Element> m) : group(std::move(g)), members(std::move(m)) {
  std::sort(members.begin(), members.end());
  if (members.empty()) throw DomainError("Foelner set must be nonempty");
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw DomainError("Foelner set has duplicate members");
  for (Element t : members)
    if (!group.contains(t)) throw DomainError("Foelner set member outside the group");
}

bool FolnerSet::contains(Element t) const { return std::binary_search(members.begin(), members.end(), t); }

CMatrix regular_rep(const FiniteGroup& g, int s) {
  const int n = g.order();
  if (s < 0 || s >= n) throw DomainError("regular_rep: element outside the group");
  CMatrix m = CMatrix::Zero(n, n);
  for (int t = 0; t < n; ++t) m(g.multiply(s, t), t) = 1.0;
  return m;
}

CMatrix window_shift(Element lo, Element hi, Element s) {
  if (hi < lo) throw DomainError("window_shift: empty window");
  const Index n = static_cast<Index>(hi - lo + 1);
  CMatrix m = CMatrix::Zero(n, n);
  for (Element t = lo; t <= hi; ++t)
    if (t + s >= lo && t + s <= hi) m(static_cast<Index>(t + s - lo), static_cast<Index>(t - lo)) = 1.0;
  return m;
}

bool lambda_adjoint_check(const FiniteGroup& g, int s) {
  const CMatrix lhs = regular_rep(g, s).adjoint();
  const CMatrix rhs = regular_rep(g, g.inverse(s));
  return (lhs.array() == rhs.array()).all();
}

std::size_t symmetric_difference_size(const FolnerSet& f, Element s) {
  std::set<Element> shifted;
  for (Element t : f.members) shifted.insert(f.group.multiply(s, t));
  std::size_t common = 0;
  for (Element t : shifted) common += f.contains(t) ? 1 : 0;
  return (shifted.size() - common) + (f.size() - common);
}

double folner_ratio(const FolnerSet& f, Element s) {
  return static_cast<double>(symmetric_difference_size(f, s)) / static_cast<double>(f.size());
}

std::size_t folner_intersection(const FolnerSet& f, Element s) {
  std::size_t common = 0;
  for (Element t : f.members) common += f.contains(f.group.multiply(s, t)) ? 1 : 0;
  const std::size_t sym = symmetric_difference_size(f, s);
  if (2 * common != 2 * f.size() - sym)
    throw std::logic_error("folner_intersection: |F cap sF| != (2|F| - |sF symdiff F|)/2");
  return common;
}

FolnerSet folner_search(const Group& g, const std::vector<Element>& shifts, double delta, std::size_t max_length) {
  if (!(delta > 0.0)) throw DomainError("folner_search: delta must be positive");
  if (shifts.empty()) throw DomainError("folner_search: shift set must be nonempty");
  for (Element s : shifts)
    if (!g.contains(s)) throw DomainError("folner_search: shift outside the group");
  if (g.is_finite()) {
    std::vector<Element> all(static_cast<std::size_t>(*g.order()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Element>(i);
    return FolnerSet(g, std::move(all));
  }
  Element k = 0;
  for (Element s : shifts) k = std::max<Element>(k, s < 0 ? -s : s);
  if (k == 0) return FolnerSet(g, {0});
  // 2k/L < delta for an interval of length L > k; start just below the bound.
  const double guess = std::floor(2.0 * static_cast<double>(k) / delta);
  if (guess + 1.0 > static_cast<double>(max_length))
    throw CapacityError("folner_search: delta too small for the permitted interval length");
  std::size_t len = static_cast<std::size_t>(std::max(1.0, guess - 2.0));
  const auto meets = [&](std::size_t l) {
    for (Element s : shifts) {
      const Element a = s < 0 ? -s : s;
      const double sym = 2.0 * static_cast<double>(std::min<Element>(a, static_cast<Element>(l)));
      if (!(sym / static_cast<double>(l) < delta)) return false;
    }
    return true;
  };
  while (len > 1 && meets(len - 1)) --len;
  while (!meets(len)) {
    if (++len > max_length) throw CapacityError("folner_search: interval length cap exceeded");
  }
  std::vector<Element> members(len);
  for (std::size_t i = 0; i < len; ++i) members[i] = static_cast<Element>(i);
  FolnerSet f(g, std::move(members));
  for (Element s : shifts)
    if (!(folner_ratio(f, s) < delta)) throw std::logic_error("folner_search: interval misses its target");
  return f;
}

}  // namespace pnuc
