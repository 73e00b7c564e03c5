#pragma once

// Finite groups by multiplication table, the integer line (represented on
// finite windows), Foelner sets and left-regular representations on l^p.

#include <pnuc/common.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pnuc {

/// Group elements: dense indices 0..order-1 for finite groups, signed
/// integers on the integer line.
using Element = long long;

class FiniteGroup {
 public:
  /// Validates closure, identity, inverses and associativity (all triples).
  static FiniteGroup from_table(std::vector<std::vector<int>> mult);
  static FiniteGroup cyclic(int n);
  static FiniteGroup dihedral(int n);  ///< order 2n; rotations 0..n-1, reflections n..2n-1
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return static_cast<int>(mult_.size()); }
  int identity() const { return identity_; }
  int multiply(int a, int b) const { return mult_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& table() const { return mult_; }
  const std::string& label() const { return label_; }
  bool is_cyclic_model() const { return cyclic_; }

 private:
  FiniteGroup() = default;
  std::vector<std::vector<int>> mult_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::string label_;
  bool cyclic_ = false;
};

/// Either a finite group or the integers. For the integers `window_radius`
/// is the smallest representation window {-r, ..., r} the caller asked for.
class Group {
 public:
  static Group finite(FiniteGroup g);
  static Group integers(int window_radius = 0);

  bool is_finite() const { return finite_.has_value(); }
  const FiniteGroup& finite_group() const;
  int window_radius() const { return radius_; }

  Element identity() const;
  Element multiply(Element a, Element b) const;
  Element inverse(Element a) const;
  bool contains(Element a) const;
  /// Finite: the number of elements. Integers: none.
  std::optional<int> order() const;
  std::string label() const;

 private:
  std::optional<FiniteGroup> finite_;
  int radius_ = 0;
};

struct FolnerSet {
  Group group;
  std::vector<Element> members;  ///< sorted, unique, nonempty

  FolnerSet(Group g, std::vector<Element> members);
  std::size_t size() const { return members.size(); }
  bool contains(Element t) const;
};

/// Left translation on l^p(G): (lambda(s) xi)(t) = xi(s^-1 t), i.e.
/// lambda(s) delta_t = delta_{st}.
CMatrix regular_rep(const FiniteGroup& g, int s);

/// Left translation compressed to the window {lo, ..., hi} of the integers.
CMatrix window_shift(Element lo, Element hi, Element s);

/// adjoint(lambda(s)) == lambda(s^-1), compared entrywise without tolerance.
bool lambda_adjoint_check(const FiniteGroup& g, int s);

/// |sF symmetric-difference F| as a count.
std::size_t symmetric_difference_size(const FolnerSet& f, Element s);

/// |sF symmetric-difference F| / |F|.
double folner_ratio(const FolnerSet& f, Element s);

/// |F intersect sF|; checked against (2|F| - |sF symdiff F|) / 2.
std::size_t folner_intersection(const FolnerSet& f, Element s);

/// A set F with max_{s in S} folner_ratio(F, s) < delta. Finite groups: the
/// whole group. Integers: the shortest interval {0, ..., L-1} that works,
/// with L capped at `max_length`.
FolnerSet folner_search(const Group& g, const std::vector<Element>& shifts, double delta,
                        std::size_t max_length = 1u << 20);

}  // namespace pnuc
