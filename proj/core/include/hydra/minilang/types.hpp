#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hydra::minilang {

enum class TypeTag {
  None,  // non-expression nodes
  Void,
  Int,
  Long,
  Float,
  Double,
  Bool,
  String,
  Null,  // type of the `null` literal
  Array,
  Record,
};

/// A resolved MiniLang type. Arrays only hold primitives, so the element is
/// a plain tag.
struct Type {
  TypeTag tag = TypeTag::None;
  TypeTag element = TypeTag::None;
  std::string record;

  static Type none() { return {}; }
  static Type void_() { return {TypeTag::Void, TypeTag::None, {}}; }
  static Type int_() { return {TypeTag::Int, TypeTag::None, {}}; }
  static Type long_() { return {TypeTag::Long, TypeTag::None, {}}; }
  static Type float_() { return {TypeTag::Float, TypeTag::None, {}}; }
  static Type double_() { return {TypeTag::Double, TypeTag::None, {}}; }
  static Type bool_() { return {TypeTag::Bool, TypeTag::None, {}}; }
  static Type string_() { return {TypeTag::String, TypeTag::None, {}}; }
  static Type null() { return {TypeTag::Null, TypeTag::None, {}}; }
  static Type array_of(TypeTag element) { return {TypeTag::Array, element, {}}; }
  static Type record_named(std::string name) {
    return {TypeTag::Record, TypeTag::None, std::move(name)};
  }

  bool is_none() const { return tag == TypeTag::None; }
  bool is_numeric() const;
  bool is_integral() const { return tag == TypeTag::Int || tag == TypeTag::Long; }
  bool is_floating() const { return tag == TypeTag::Float || tag == TypeTag::Double; }
  bool is_record_like() const { return tag == TypeTag::Record || tag == TypeTag::Null; }

  std::string to_string() const;

  friend bool operator==(const Type&, const Type&) = default;
};

/// Position of a numeric type on the widening chain int -> long -> float -> double.
int numeric_rank(TypeTag tag);
bool is_primitive_tag(TypeTag tag);
std::string tag_name(TypeTag tag);

struct FieldDecl {
  std::string name;
  Type type;
};

struct RecordInfo {
  std::string name;
  std::optional<std::string> extends;
  std::vector<FieldDecl> own_fields;
};

/// Nominal record declarations of a program.
class RecordTable {
 public:
  void add(RecordInfo info);
  bool contains(const std::string& name) const { return records_.count(name) != 0; }
  const RecordInfo* find(const std::string& name) const;

  /// Inherited fields first, then the record's own fields, in declaration order.
  std::vector<FieldDecl> all_fields(const std::string& name) const;

  /// True when `sub` equals `super` or reaches it through `extends` links.
  bool is_subtype(const std::string& sub, const std::string& super) const;

  const std::map<std::string, RecordInfo>& records() const { return records_; }

 private:
  std::map<std::string, RecordInfo> records_;
};

/// Implicit conversion used for assignment, argument passing and return:
/// identity, numeric widening, record upcast, and null to any record.
bool is_assignable(const Type& from, const Type& to, const RecordTable* records);

/// Symmetric compatibility: equal, related by record subtyping, or both on the
/// numeric widening chain.
bool types_compatible(const Type& a, const Type& b, const RecordTable* records);

}  // namespace hydra::minilang
