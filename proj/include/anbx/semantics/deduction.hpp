#pragma once

#include <set>
#include <string>

#include "anbx/syntax/ast.hpp"

namespace anbx::semantics {

/// inv(inv(t)) rewritten to t everywhere in the term.
syntax::Term normalize(const syntax::Term& t);

/// Key that opens {M}key: t for key inv(t), inv(key) otherwise.
syntax::Term decryption_key(const syntax::Term& key);

/// What an agent can derive from a set of terms.
///
/// The stored set is closed under analysis: pairs are split, symmetric
/// ciphers are opened when their key is derivable, asymmetric ciphers when
/// the matching decryption key is. A term is derivable if it is in the set,
/// or is built by pairing, encryption, or application of a public function
/// from derivable parts. Analysis only ever adds subterms of stored terms,
/// so saturation terminates.
class KnowledgeSet {
 public:
  explicit KnowledgeSet(std::set<std::string> public_functions = {});

  void add(const syntax::Term& t);
  bool can_derive(const syntax::Term& t) const;
  const std::set<syntax::Term>& terms() const { return known_; }

 private:
  void saturate();

  std::set<std::string> public_;
  std::set<syntax::Term> known_;
};

}  // namespace anbx::semantics
