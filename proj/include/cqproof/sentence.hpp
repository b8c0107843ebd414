#ifndef CQPROOF_SENTENCE_HPP
#define CQPROOF_SENTENCE_HPP

#include <variant>

#include "cqproof/axioms.hpp"
#include "cqproof/mtcq.hpp"

namespace cqproof {

/// What a proof vertex can be labeled with: a Boolean CQ (covering ABox
/// assertions and ground conjunctions), a TBox axiom or rule, or a
/// temporally annotated formula.
using Sentence = std::variant<CQ, DLLiteAxiom, ExistentialRule, AnnotatedFormula>;

/// Canonical identity key; two sentences are the same label iff their keys
/// are equal. CQs are compared up to renaming of existential variables and
/// atom reordering; conjunct multiplicity is preserved.
std::string sentence_key(const Sentence& s);

/// Human-readable rendering (keeps the constructed atom order of CQs).
std::string sentence_str(const Sentence& s);

/// One of "cq", "assertion", "axiom", "rule", "annotated".
std::string sentence_kind(const Sentence& s);

/// Symbol count, the label-size measure used by the weighted hypergraph size.
uint64_t sentence_size(const Sentence& s);

bool sentence_equal(const Sentence& a, const Sentence& b);

bool is_assertion(const Sentence& s);        // ground single-atom CQ
bool is_ground_cq(const Sentence& s);        // Boolean ground CQ
const CQ* as_cq(const Sentence& s);
const AnnotatedFormula* as_annotated(const Sentence& s);

Sentence assertion_sentence(const Atom& ground_atom);

/// Whether `s` belongs to the given theory: assertions must be ABox atoms,
/// axioms/rules must be TBox entries. Annotated formulas are not part of an
/// atemporal theory.
bool in_theory(const Sentence& s, const KnowledgeBase& kb);

/// Index of the TBox entry this axiom/rule sentence denotes (matching the
/// stored entry or its rule form), if any.
std::optional<size_t> tbox_index_of(const KnowledgeBase& kb, const Sentence& s);

}  // namespace cqproof

#endif
