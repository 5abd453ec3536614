#ifndef CCM_DSL_HPP_
#define CCM_DSL_HPP_

#include <map>
#include <string>
#include <string_view>

#include "ccm/annotate.hpp"
#include "ccm/error.hpp"
#include "ccm/program.hpp"
#include "ccm/tso.hpp"

namespace ccm::dsl {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& reason)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              reason),
        line_(line),
        column_(column),
        reason_(reason) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  int column_;
  std::string reason_;
};

// A parsed `.ccm` file. `program` carries ghost variables and the `augment`
// assignments (flagged in ghost_targets) when present.
struct Document {
  Program program;
  bool has_annotation = false;
  Annotation annotation;
  std::map<int, tso::VarClass> declared_classes;

  bool has_ghost() const;
  bool operator==(const Document&) const = default;
};

Document parse(std::string_view text);
std::string serialize(const Document& doc);

// Throws LookupError when the file cannot be read.
Document load(const std::string& path);

}  // namespace ccm::dsl

#endif  // CCM_DSL_HPP_
