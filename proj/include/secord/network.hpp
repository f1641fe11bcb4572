#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace secord {

using VarId = int;
using Value = int;
using ConstraintId = int;
using Tuple = std::vector<Value>;

class Trail;
class ConstraintNetwork;
struct ConstraintSpec;
ConstraintNetwork build_network(std::span<const int>, std::span<const ConstraintSpec>);

/// Largest cross product of initial domains a single constraint may span.
inline constexpr std::size_t kMaxConstraintProduct = std::size_t{1} << 24;

enum class Polarity { supports, conflicts };

/// Current domain of one variable, as a membership mask over its initial values 0..d-1.
class Domain {
  public:
    Domain() = default;
    explicit Domain(int initial_size);

    int initial_size() const { return static_cast<int>(present_.size()); }
    int size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool contains(Value a) const {
        return a >= 0 && a < initial_size() && present_[static_cast<std::size_t>(a)] != 0;
    }
    std::vector<Value> values() const;
    /// Smallest present value, or -1 when empty.
    Value first() const;

    bool operator==(const Domain &) const = default;

  private:
    friend class ConstraintNetwork;
    bool erase(Value a);
    void restore(Value a);

    std::vector<std::uint8_t> present_;
    int size_ = 0;
};

struct Assignment {
    VarId var = 0;
    Value value = 0;
    auto operator<=>(const Assignment &) const = default;
};

/// A set of (variable, value) pairs with at most one pair per variable, kept sorted by variable.
class Instantiation {
  public:
    Instantiation() = default;
    Instantiation(std::initializer_list<Assignment> pairs);
    explicit Instantiation(std::vector<Assignment> pairs);

    /// Throws ModelError if the variable is already bound to a different value.
    void add(VarId x, Value a);
    bool binds(VarId x) const;
    std::optional<Value> value_of(VarId x) const;
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    std::span<const Assignment> pairs() const { return pairs_; }
    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }
    bool is_subset_of(const Instantiation &other) const;

    auto operator<=>(const Instantiation &) const = default;

  private:
    std::vector<Assignment> pairs_;
};

/// Extensional constraint. The relation is held as a dense allowed-mask over the
/// cross product of the scope's initial domains; polarity only records which
/// table (supports or conflicts) is the stored form.
class Constraint {
  public:
    ConstraintId id() const { return id_; }
    std::span<const VarId> scope() const { return scope_; }
    int arity() const { return static_cast<int>(scope_.size()); }
    Polarity polarity() const { return polarity_; }
    /// Position of x in the scope, or -1.
    int position_of(VarId x) const;
    bool involves(VarId x) const { return position_of(x) >= 0; }

    std::size_t product_size() const { return allowed_.size(); }
    std::size_t allowed_count() const { return allowed_count_; }
    bool is_universal() const { return allowed_count_ == allowed_.size(); }
    bool relation_empty() const { return allowed_count_ == 0; }

    std::size_t stride(int position) const { return strides_[static_cast<std::size_t>(position)]; }
    int dim(int position) const { return dims_[static_cast<std::size_t>(position)]; }
    std::size_t index_of(std::span<const Value> tuple) const;
    Tuple tuple_at(std::size_t index) const;
    Value component(std::size_t index, int position) const {
        auto p = static_cast<std::size_t>(position);
        return static_cast<Value>((index / strides_[p]) % static_cast<std::size_t>(dims_[p]));
    }

    bool allows_index(std::size_t index) const { return allowed_[index] != 0; }
    bool allows(std::span<const Value> tuple) const { return allowed_[index_of(tuple)] != 0; }

    /// Stored table in lexicographic order: allowed tuples for supports, forbidden ones for conflicts.
    std::vector<Tuple> table() const;
    std::vector<Tuple> forbidden_tuples() const;

    std::uint64_t weight() const { return weight_; }
    void set_weight(std::uint64_t w) { weight_ = w; }
    void bump_weight() { ++weight_; }

  private:
    friend class ConstraintNetwork;
    friend ConstraintNetwork build_network(std::span<const int>, std::span<const ConstraintSpec>);
    Constraint(ConstraintId id, std::vector<VarId> scope, std::vector<int> dims, Polarity polarity);

    ConstraintId id_ = 0;
    std::vector<VarId> scope_;
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    Polarity polarity_ = Polarity::supports;
    std::vector<std::uint8_t> allowed_;
    std::size_t allowed_count_ = 0;
    std::uint64_t weight_ = 1;
};

struct ConstraintSpec {
    std::vector<VarId> scope;
    Polarity polarity = Polarity::supports;
    std::vector<Tuple> tuples;
};

class ConstraintNetwork {
  public:
    ConstraintNetwork() = default;
    /// Variables 0..n-1 with initial domains {0..sizes[i]-1} and no constraints.
    explicit ConstraintNetwork(std::span<const int> domain_sizes);

    int num_variables() const { return static_cast<int>(domains_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    int max_domain_size() const;
    int max_arity() const;
    bool is_binary() const { return max_arity() <= 2; }

    const Domain &domain(VarId x) const { return domains_.at(static_cast<std::size_t>(x)); }
    const Constraint &constraint(ConstraintId c) const { return constraints_.at(static_cast<std::size_t>(c)); }
    Constraint &constraint(ConstraintId c) { return constraints_.at(static_cast<std::size_t>(c)); }
    std::span<const Constraint> constraints() const { return constraints_; }
    std::span<const ConstraintId> constraints_of(VarId x) const {
        return var_constraints_.at(static_cast<std::size_t>(x));
    }

    /// The binary constraint with scope set {x, y}, if any.
    std::optional<ConstraintId> binary_between(VarId x, VarId y) const;
    /// The constraint whose scope set equals `vars` (any order), if any.
    std::optional<ConstraintId> constraint_on(std::span<const VarId> vars) const;
    /// Is (a, b) allowed for {(x, a), (y, b)} by the binary constraint on {x, y}? True when none exists.
    bool pair_allowed(VarId x, Value a, VarId y, Value b) const;

    bool failed() const { return failed_; }

    /// Deletes a from dom(x). Returns false if it was already absent.
    bool remove_value(VarId x, Value a, Trail *trail = nullptr);
    /// Forbids the tuple at `index` in constraint c. Returns false if it was already forbidden.
    bool forbid_tuple(ConstraintId c, std::size_t index, Trail *trail = nullptr);
    /// Creates and indexes a new constraint. Scope set must not already be constrained.
    ConstraintId add_constraint(std::vector<VarId> scope, Polarity polarity, std::span<const Tuple> tuples);

    void check_variable(VarId x) const;

    bool operator==(const ConstraintNetwork &other) const;

  private:
    friend class Trail;
    friend ConstraintNetwork build_network(std::span<const int>, std::span<const ConstraintSpec>);
    void restore_value(VarId x, Value a);
    void restore_tuple(ConstraintId c, std::size_t index);
    void set_failed(bool f) { failed_ = f; }
    ConstraintId insert_constraint(Constraint c);

    std::vector<Domain> domains_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<ConstraintId>> var_constraints_;
    std::unordered_map<std::uint64_t, ConstraintId> binary_index_;
    std::map<std::vector<VarId>, ConstraintId> scope_index_;
    bool failed_ = false;
};

/// Builds a normalized network: unary constraints folded into domains, constraints over
/// the same scope set merged by intersection, universal constraints dropped.
ConstraintNetwork build_network(std::span<const int> domain_sizes, std::span<const ConstraintSpec> constraints);

bool is_locally_consistent(const ConstraintNetwork &network, const Instantiation &inst);

/// P \ I: records I as an explicit nogood (value removal, tuple removal, or a new conflicts constraint).
void discard_nogood(ConstraintNetwork &network, const Instantiation &nogood);

/// The explicit nogoods of the network, sorted and without duplicates.
std::vector<Instantiation> nogood_representation(const ConstraintNetwork &network);

enum class Ordering { equal, smaller, greater, incomparable };

/// How nogood sets are related when comparing networks.
enum class NogoodOrder {
    raw,         ///< plain set inclusion of explicit nogoods
    subsumption, ///< a nogood is covered by any subset of it present in the other network
};

/// Relates P1 to P2 in the nogood partial order. A failed network is below every
/// other network and all failed networks are equal.
Ordering compare(const ConstraintNetwork &p1, const ConstraintNetwork &p2, NogoodOrder order = NogoodOrder::raw);

/// P|x=a. Throws ModelError if a is not in the current domain of x.
void assign(ConstraintNetwork &network, VarId x, Value a, Trail *trail = nullptr);

const char *to_string(Ordering o);

} // namespace secord
