#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace cypherforge {

// Thrown when an operation's preconditions are violated by the caller.
// These indicate bugs in the calling code, not recoverable conditions.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Value type describing the static type of an expression or variable.
//
// NULL_VALUE unifies with every type in both directions (a null literal is
// acceptable wherever any concrete type is expected, and vice versa).
// ANY is a generator-side request marker ("pick something"); it never ends
// up stored in a query context entry.
class CypherType {
 public:
  enum class Kind {
    Integer,
    Float,
    String,
    Boolean,
    List,
    Map,
    Node,
    Relationship,
    Path,
    Null,
    Any,
  };

  CypherType() : kind_(Kind::Any) {}

  static CypherType integer() { return CypherType(Kind::Integer); }
  static CypherType real() { return CypherType(Kind::Float); }
  static CypherType string() { return CypherType(Kind::String); }
  static CypherType boolean() { return CypherType(Kind::Boolean); }
  static CypherType map() { return CypherType(Kind::Map); }
  static CypherType node() { return CypherType(Kind::Node); }
  static CypherType relationship() { return CypherType(Kind::Relationship); }
  static CypherType path() { return CypherType(Kind::Path); }
  static CypherType null() { return CypherType(Kind::Null); }
  static CypherType any() { return CypherType(Kind::Any); }

  static CypherType list(CypherType element) {
    CypherType t(Kind::List);
    t.element_ = std::make_shared<CypherType>(std::move(element));
    return t;
  }

  Kind kind() const { return kind_; }

  // Element type of a list. Contract: kind() == Kind::List.
  const CypherType& element() const {
    if (kind_ != Kind::List || !element_)
      throw ContractError("CypherType::element on non-list type");
    return *element_;
  }

  bool is_list() const { return kind_ == Kind::List; }
  bool is_numeric() const {
    return kind_ == Kind::Integer || kind_ == Kind::Float;
  }
  bool is_graph_entity() const {
    return kind_ == Kind::Node || kind_ == Kind::Relationship;
  }

  bool operator==(const CypherType& other) const;
  bool operator!=(const CypherType& other) const { return !(*this == other); }

  // Structural compatibility with null/any as wildcards.
  bool unifies_with(const CypherType& other) const;

  std::string to_string() const;

 private:
  explicit CypherType(Kind k) : kind_(k) {}

  Kind kind_;
  std::shared_ptr<CypherType> element_;
};

}  // namespace cypherforge
