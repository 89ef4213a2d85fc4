#include "hydra/minilang/types.hpp"

#include <set>

namespace hydra::minilang {

int numeric_rank(TypeTag tag) {
  switch (tag) {
    case TypeTag::Int: return 0;
    case TypeTag::Long: return 1;
    case TypeTag::Float: return 2;
    case TypeTag::Double: return 3;
    default: return -1;
  }
}

bool is_primitive_tag(TypeTag tag) {
  switch (tag) {
    case TypeTag::Int:
    case TypeTag::Long:
    case TypeTag::Float:
    case TypeTag::Double:
    case TypeTag::Bool:
    case TypeTag::String:
      return true;
    default:
      return false;
  }
}

std::string tag_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::None: return "none";
    case TypeTag::Void: return "void";
    case TypeTag::Int: return "int";
    case TypeTag::Long: return "long";
    case TypeTag::Float: return "float";
    case TypeTag::Double: return "double";
    case TypeTag::Bool: return "bool";
    case TypeTag::String: return "string";
    case TypeTag::Null: return "null";
    case TypeTag::Array: return "array";
    case TypeTag::Record: return "record";
  }
  return "?";
}

bool Type::is_numeric() const { return numeric_rank(tag) >= 0; }

std::string Type::to_string() const {
  if (tag == TypeTag::Array) return "array<" + tag_name(element) + ">";
  if (tag == TypeTag::Record) return record;
  return tag_name(tag);
}

void RecordTable::add(RecordInfo info) {
  auto name = info.name;
  records_[name] = std::move(info);
}

const RecordInfo* RecordTable::find(const std::string& name) const {
  auto it = records_.find(name);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<FieldDecl> RecordTable::all_fields(const std::string& name) const {
  std::vector<const RecordInfo*> chain;
  std::set<std::string> seen;
  for (const RecordInfo* r = find(name); r != nullptr && seen.insert(r->name).second;
       r = r->extends ? find(*r->extends) : nullptr) {
    chain.push_back(r);
  }
  std::vector<FieldDecl> fields;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const auto& f : (*it)->own_fields) fields.push_back(f);
  }
  return fields;
}

bool RecordTable::is_subtype(const std::string& sub, const std::string& super) const {
  std::set<std::string> seen;
  for (const RecordInfo* r = find(sub); r != nullptr && seen.insert(r->name).second;
       r = r->extends ? find(*r->extends) : nullptr) {
    if (r->name == super) return true;
  }
  return sub == super;
}

bool is_assignable(const Type& from, const Type& to, const RecordTable* records) {
  if (from == to) return true;
  if (from.is_numeric() && to.is_numeric()) {
    return numeric_rank(from.tag) <= numeric_rank(to.tag);
  }
  if (to.tag == TypeTag::Record) {
    if (from.tag == TypeTag::Null) return true;
    if (from.tag == TypeTag::Record) {
      return records != nullptr ? records->is_subtype(from.record, to.record)
                                : from.record == to.record;
    }
  }
  return false;
}

bool types_compatible(const Type& a, const Type& b, const RecordTable* records) {
  if (a == b) return true;
  if (a.is_numeric() && b.is_numeric()) return true;
  if (a.is_record_like() && b.is_record_like()) {
    if (a.tag == TypeTag::Null || b.tag == TypeTag::Null) return true;
    return is_assignable(a, b, records) || is_assignable(b, a, records);
  }
  return false;
}

}  // namespace hydra::minilang
