#pragma once

#include "ufckit/basecat.hpp"

namespace ufckit {

Cospan make_cospan(int m, int n, int k, FinMap l, FinMap r);
Cospan canonical(Cospan c);
Cospan cospan_identity(int n);
Cospan cospan_compose(const Cospan& g, const Cospan& f);
Cospan cospan_tensor(const Cospan& f, const Cospan& g);
Cospan cospan_permutation(const FinMap& pi);
Decomposition cospan_connected_decompose(const Cospan& f);

Span make_span(int m, int n, FinMap l, FinMap r);
Span span_compose(const Span& g, const Span& f);
Span span_tensor(const Span& f, const Span& g);
Decomposition span_connected_decompose(const Span& f);

TiesMor make_ties(FinMap perm, std::vector<int> tie);
TiesMor ties_compose(const TiesMor& g, const TiesMor& f);
TiesMor ties_tensor(const TiesMor& f, const TiesMor& g);
Decomposition ties_decompose(const TiesMor& f);

FinSetMor finset_compose(const FinSetMor& g, const FinSetMor& f);
Decomposition finset_decompose(const FinSetMor& f);

/// The block permutation B_{n,m}: n+m -> m+n moving the first n wires past the last m.
FinMap block_swap(int n, int m);

/// All set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> restricted_growth_strings(int n);

}  // namespace ufckit
