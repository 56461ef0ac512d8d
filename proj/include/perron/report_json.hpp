#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perron/matrix.hpp"

namespace perron {
namespace json {

// Minimal ordered JSON document builder. Numbers are printed with %.17g so
// every double round-trips exactly; non-finite doubles serialize as null.
class Value {
 public:
  static Value null();
  static Value boolean(bool b);
  static Value integer(long long i);
  static Value number(double d);
  static Value text(std::string s);
  static Value array();
  static Value object();

  bool is_array() const { return kind_ == Kind::kArray; }
  bool is_object() const { return kind_ == Kind::kObject; }

  // Array append / object insert (insertion order is preserved).
  Value& push(Value v);
  Value& set(const std::string& key, Value v);

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { kNull, kBool, kInt, kDouble, kString, kArray, kObject };
  Kind kind_ = Kind::kNull;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<Value> items_;
  std::vector<std::pair<std::string, Value>> fields_;

  void write(std::string& out, int indent, int depth) const;
};

// Matrix as a JSON array of row arrays.
Value matrix_value(const DenseMatrix& a);

}  // namespace json
}  // namespace perron
