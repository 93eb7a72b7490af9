#include "cypherforge/types.hpp"

namespace cypherforge {

bool CypherType::operator==(const CypherType& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::List) return element() == other.element();
  return true;
}

bool CypherType::unifies_with(const CypherType& other) const {
  if (kind_ == Kind::Null || other.kind_ == Kind::Null) return true;
  if (kind_ == Kind::Any || other.kind_ == Kind::Any) return true;
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::List) return element().unifies_with(other.element());
  return true;
}

std::string CypherType::to_string() const {
  switch (kind_) {
    case Kind::Integer: return "INTEGER";
    case Kind::Float: return "FLOAT";
    case Kind::String: return "STRING";
    case Kind::Boolean: return "BOOLEAN";
    case Kind::List: return "LIST<" + element().to_string() + ">";
    case Kind::Map: return "MAP";
    case Kind::Node: return "NODE";
    case Kind::Relationship: return "RELATIONSHIP";
    case Kind::Path: return "PATH";
    case Kind::Null: return "NULL";
    case Kind::Any: return "ANY";
  }
  return "ANY";
}

}  // namespace cypherforge
