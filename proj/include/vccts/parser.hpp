#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vccts/automaton.hpp"
#include "vccts/syntax.hpp"

namespace vccts {

/// Everything a definition file declares.
struct Module {
  DefEnv env;
  std::vector<std::pair<std::string, TermPtr>> processes;  // in file order
  std::map<std::string, TreeAutomaton> automata;
  std::map<std::string, SigmaTree> trees;

  TermPtr process(const std::string& name) const;  // throws SyntaxError
};

/// Parses a whole definition file. Throws ParseError with line/column.
Module parse_module(const std::string& source);
Module parse_module_file(const std::string& path);

/// Parses further clauses into an existing module (symbols and definitions stay visible).
void parse_into(Module& module, const std::string& source);

/// Parses a single process term against the symbols and constants of `env`.
TermPtr parse_process(const std::string& source, const DefEnv& env);
ExprPtr parse_expr(const std::string& source);
Value parse_value(const std::string& source);

}  // namespace vccts
