#pragma once

// Plugin interface for external sources.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hexcdnl/core.hpp"

namespace hexcdnl {

/// Raised when an external source misbehaves: it throws, returns tuples of
/// the wrong arity, violates a declared property or answers differently for
/// identical input.
class PluginError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InputKind : std::uint8_t { Predicate, Constant };

/// What an oracle sees: for each input position either a constant or the
/// extension of a predicate under the current assignment.
class SourceQuery {
 public:
  struct Input {
    InputKind kind;
    std::string name;  // predicate name or constant
    TupleSet extension;
  };

  explicit SourceQuery(std::vector<Input> inputs) : inputs_(std::move(inputs)) {}

  std::size_t arity() const { return inputs_.size(); }
  InputKind kind(std::size_t i) const { return inputs_.at(i).kind; }
  const std::string& name(std::size_t i) const { return inputs_.at(i).name; }
  const std::string& constant(std::size_t i) const { return inputs_.at(i).name; }
  const TupleSet& extension(std::size_t i) const { return inputs_.at(i).extension; }

 private:
  std::vector<Input> inputs_;
};

/// Literal of a user-defined nogood, expressed relative to one external atom
/// with input list: either an atom over the predicate at an input position, or
/// the replacement atom for an output tuple.
struct SymbolicLiteral {
  enum class Target : std::uint8_t { Input, Output };

  Target target;
  bool positive;
  std::size_t input = 0;
  Tuple args;

  static SymbolicLiteral input_atom(bool positive, std::size_t position, Tuple args) {
    return {Target::Input, positive, position, std::move(args)};
  }
  static SymbolicLiteral output_atom(bool positive, Tuple args) {
    return {Target::Output, positive, 0, std::move(args)};
  }
};

using SymbolicNogood = std::vector<SymbolicLiteral>;

struct SourceProperties {
  std::vector<std::size_t> monotonic;  // input positions
  bool functional = false;

  bool is_monotonic(std::size_t position) const {
    return std::find(monotonic.begin(), monotonic.end(), position) != monotonic.end();
  }
};

using Oracle = std::function<TupleSet(const SourceQuery&)>;
using UserLearn =
    std::function<std::vector<SymbolicNogood>(const SourceQuery&, const TupleSet& outputs)>;

struct ExternalSourceDescriptor {
  std::string name;
  std::vector<InputKind> inputs;
  std::size_t output_arity = 0;
  Oracle oracle;
  SourceProperties properties;
  UserLearn user_learn;  // optional
};

/// Registered sources by name, plus per-atom property overrides keyed by the
/// textual input list, e.g. "&db[r,q]".
class SourceRegistry {
 public:
  void add(ExternalSourceDescriptor d) {
    if (d.name.empty()) throw std::invalid_argument("external source without a name");
    if (!d.oracle) throw std::invalid_argument("external source '" + d.name + "' has no oracle");
    auto name = d.name;
    sources_[name] = std::make_shared<const ExternalSourceDescriptor>(std::move(d));
  }

  const ExternalSourceDescriptor* find(const std::string& name) const {
    auto it = sources_.find(name);
    return it == sources_.end() ? nullptr : it->second.get();
  }

  void override_properties(std::string atom_key, SourceProperties p) {
    overrides_[std::move(atom_key)] = std::move(p);
  }

  const SourceProperties& properties_for(const ExternalSourceDescriptor& d,
                                         const std::string& atom_key) const {
    auto it = overrides_.find(atom_key);
    return it == overrides_.end() ? d.properties : it->second;
  }

 private:
  std::map<std::string, std::shared_ptr<const ExternalSourceDescriptor>> sources_;
  std::map<std::string, SourceProperties> overrides_;
};

}  // namespace hexcdnl
