// SPDX-License-Identifier: Apache-2.0
#include "opforge/dnf_synth.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace opforge {

namespace {

void validate_cover(const std::vector<Implicant>& cover, uint32_t num_inputs) {
  if (num_inputs < 1 || num_inputs > 16)
    throw std::invalid_argument("cover width must be in [1, 16]");
  const uint32_t full_mask = (1u << num_inputs) - 1;
  for (const Implicant& imp : cover) {
    if ((imp.care & ~full_mask) || (imp.value & ~imp.care))
      throw std::invalid_argument("malformed implicant in cover");
  }
}

// Polarity-free factor base: a variable or an XOR of two bases.
struct FactorBase {
  bool is_var;
  uint32_t var = 0;
  std::shared_ptr<const FactorBase> lhs, rhs; // xor operands
  std::string key;                            // canonical, orders factors
};

using BasePtr = std::shared_ptr<const FactorBase>;

BasePtr make_var(uint32_t index) {
  auto base = std::make_shared<FactorBase>();
  base->is_var = true;
  base->var = index;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "v%05u", index);
  base->key = buf;
  return base;
}

BasePtr make_xor(BasePtr a, BasePtr b) {
  if (b->key < a->key)
    std::swap(a, b);
  auto base = std::make_shared<FactorBase>();
  base->is_var = false;
  base->lhs = std::move(a);
  base->rhs = std::move(b);
  base->key = "x(" + base->lhs->key + "," + base->rhs->key + ")";
  return base;
}

struct Factor {
  BasePtr base;
  bool negated;
};

// Product of factors, kept sorted by base key. Keys are unique in a term.
using Term = std::vector<Factor>;

bool same_bases(const Term& a, const Term& b) {
  if (a.size() != b.size())
    return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].base->key != b[i].base->key)
      return false;
  return true;
}

// Merge two terms whose factor bases agree and whose polarities differ in
// exactly two places; returns false when the pattern does not apply.
bool try_merge(const Term& a, const Term& b, Term& merged) {
  if (!same_bases(a, b))
    return false;
  std::vector<size_t> flipped;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].negated != b[i].negated)
      flipped.push_back(i);
  if (flipped.size() != 2)
    return false;
  const Factor& f1 = a[flipped[0]];
  const Factor& f2 = a[flipped[1]];
  Factor combined{make_xor(f1.base, f2.base), f1.negated == f2.negated};
  merged.clear();
  for (size_t i = 0; i < a.size(); ++i)
    if (i != flipped[0] && i != flipped[1])
      merged.push_back(a[i]);
  merged.push_back(std::move(combined));
  std::sort(merged.begin(), merged.end(),
            [](const Factor& x, const Factor& y) { return x.base->key < y.base->key; });
  return true;
}

uint32_t build_base(const FactorBase& base, NetworkBuilder& builder) {
  if (base.is_var)
    return builder.leaf(base.var);
  return builder.mk_gate(GateKind::Xor, build_base(*base.lhs, builder),
                         build_base(*base.rhs, builder));
}

uint32_t build_term(const Term& term, NetworkBuilder& builder) {
  if (term.empty())
    return builder.constant(true);
  uint32_t acc = 0;
  bool first = true;
  for (const Factor& factor : term) {
    uint32_t ref = build_base(*factor.base, builder);
    if (factor.negated)
      ref = builder.mk_not(ref);
    acc = first ? ref : builder.mk_gate(GateKind::And, acc, ref);
    first = false;
  }
  return acc;
}

GateNetwork build_terms(const std::vector<Term>& terms, uint32_t num_inputs) {
  NetworkBuilder builder(num_inputs);
  uint32_t acc = builder.constant(false);
  bool first = true;
  for (const Term& term : terms) {
    const uint32_t ref = build_term(term, builder);
    acc = first ? ref : builder.mk_gate(GateKind::Or, acc, ref);
    first = false;
  }
  builder.add_output(acc);
  return builder.take();
}

std::vector<Term> terms_from_cover(const std::vector<Implicant>& cover) {
  std::vector<Term> terms;
  for (const Implicant& imp : cover) {
    Term term;
    for (uint32_t i = 0; i < 32; ++i) {
      const Literal lit = imp.literal(i);
      if (lit == Literal::Absent)
        continue;
      term.push_back({make_var(i), lit == Literal::Negative});
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

} // namespace

GateNetwork to_gate_network(const std::vector<Implicant>& cover, uint32_t num_inputs) {
  validate_cover(cover, num_inputs);
  return build_terms(terms_from_cover(cover), num_inputs);
}

GateNetwork xor_rewrite(const std::vector<Implicant>& cover, uint32_t num_inputs) {
  validate_cover(cover, num_inputs);
  std::vector<Term> terms = terms_from_cover(cover);

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < terms.size() && !changed; ++i) {
      for (size_t j = i + 1; j < terms.size() && !changed; ++j) {
        Term merged;
        if (try_merge(terms[i], terms[j], merged)) {
          terms[i] = std::move(merged);
          terms.erase(terms.begin() + static_cast<ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  return build_terms(terms, num_inputs);
}

} // namespace opforge
