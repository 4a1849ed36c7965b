#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "permcohom/abelian/abelian.hpp"
#include "permcohom/cohomology/cohomology.hpp"
#include "permcohom/replay/certificate.hpp"

namespace pcoh::replay {

using abelian::AbelianInvariants;

struct ReplayOptions {
  /// Shared resolution store; each scenario makes a private one when null.
  cohomology::ResolutionSource* source = nullptr;
  /// Wall-clock budget in seconds for each budgeted step: the K resolution
  /// with its maps, and the S6 row of the table. Unlimited when unset.
  std::optional<double> budget_seconds;
  /// Group labels ("S4", "K", ...) whose resolution gets one boundary
  /// coefficient altered before validation. For fault-injection runs.
  std::set<std::string> corrupt;
};

/// H^5(S4, Z) = Z/2 and its restriction to <(1,2),(3,4)> is injective,
/// on both restriction backends.
Certificate replay_lemma_s4(const ReplayOptions& opts = {});

/// H^5(K, Z) = (Z/2)^9 and Res^K_L injective, plus the odd-index
/// argument for S8. The mod-2 dimensions of K and the Kuenneth check on L
/// run regardless of the budget.
Certificate replay_lemma_s8(const ReplayOptions& opts = {});

struct H4Row {
  std::size_t n = 0;
  AbelianInvariants expected;
  std::optional<AbelianInvariants> computed;
  bool stretch = false;
  Status status = Status::fail;
};

struct H4Table {
  std::vector<H4Row> rows;
  Certificate certificate;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// H^4(S_n, C^x) = H^5(S_n, Z) for n = 2..max_n against the reference
/// list 0, 0, Z/2, Z/2, Z/2 x Z/2. Requires 2 <= max_n <= 6; n = 6 is the
/// budgeted stretch row.
H4Table replay_h4_table(std::size_t max_n, const ReplayOptions& opts = {});

struct PropInvReport {
  cohomology::ShapiroReport shapiro;
  /// A/2A for n = 3, A/2A x A[2] for n >= 4.
  AbelianInvariants clause_reading;
  /// Ext(H_1(S_{n-1}), A) + Hom(H_2(S_{n-1}), A).
  AbelianInvariants uct_reading;
  bool matches_clause = false;
  bool matches_uct = false;
  std::string adjudication;
  Certificate certificate;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// H^2(S_n, A^n) computed directly, through Shapiro's lemma, and through
/// the universal coefficient sequence, compared with the closed-form
/// clause. Requires n in {3, 4, 5}.
PropInvReport replay_prop_inv(std::size_t n, const AbelianInvariants& a, const ReplayOptions& opts = {});

struct NakaokaCase {
  std::size_t k = 0;
  std::size_t n = 0;
  AbelianInvariants source;  ///< H^k(S_n, F2)
  AbelianInvariants target;  ///< H^k(S_2k, F2)
  bool injective = false;
  bool surjective = false;
  [[nodiscard]] bool holds() const { return injective && surjective; }
};

/// Res: H^k(S_n, F2) -> H^k(S_2k, F2) on the chain-map backend.
NakaokaCase nakaoka_check(cohomology::ResolutionSource& src, std::size_t k, std::size_t n);

/// The vanishing argument for o4 of the standard permutation action:
/// cited categorical lemmas and stability, with computed leaves for S2,
/// the two lemma certificates and Nakaoka spot checks in degrees 1 and 2.
Certificate replay_theorem_main(const ReplayOptions& opts = {});

}  // namespace pcoh::replay
