#include "ramforge/nottingham.hpp"

#include <cstdlib>
#include <map>
#include <string>

namespace ramforge {

unsigned worker_count() {
  if (const char* env = std::getenv("RAMFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

NottElem::NottElem(Series<FqElem> s) : s_(std::move(s)) {
  if (!s_[1].is_one()) throw Error(ErrorCode::InvalidArgument, "not in the Nottingham group: linear coefficient must be 1");
}

NottElem NottElem::identity(const FqPtr& k, int D) { return NottElem(Series<FqElem>::identity(k, D)); }

NottElem NottElem::operator*(const NottElem& b) const { return NottElem(compose(s_, b.s_)); }

NottElem NottElem::pow(std::uint64_t n) const { return NottElem(iterate(s_, n)); }

NottElem NottElem::inverse() const { return NottElem(comp_inverse(s_)); }

std::optional<long> ram_number(const NottElem& sigma) {
  const auto& s = sigma.series();
  for (int k = 2; k <= s.trunc(); ++k)
    if (!s[k].is_zero()) return k - 1;
  return std::nullopt;
}

std::vector<long> RamProfile::finite_prefix() const {
  std::vector<long> out;
  for (const auto& v : values) {
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

bool RamProfile::complete() const {
  for (const auto& v : values)
    if (!v) return false;
  return true;
}

RamProfile ram_sequence(const NottElem& sigma, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 0");
  RamProfile prof;
  prof.trunc = sigma.trunc();
  const FqPtr& k = sigma.series().ring();
  prof.p = k->p();
  NottElem s = sigma;
  bool identity = false;
  for (int n = 0; n <= n_max; ++n) {
    if (!identity) {
      const auto i = ram_number(s);
      identity = !i.has_value();
      prof.values.push_back(i);
      if (!identity && n < n_max) s = s.pow(static_cast<std::uint64_t>(prof.p));
    } else {
      prof.values.push_back(std::nullopt);
    }
  }
  return prof;
}

long FiniteFiltration::index_at(long t) const {
  long idx = 1;
  for (std::size_t m = 0; m < breaks.size(); ++m) {
    if (breaks[m] < t) idx = indices[m];
    else break;
  }
  return idx;
}

void FiniteFiltration::validate() const {
  if (breaks.size() != indices.size()) throw Error(ErrorCode::InvalidArgument, "breaks and indices differ in length");
  for (std::size_t m = 0; m < breaks.size(); ++m) {
    if (indices[m] < 1) throw Error(ErrorCode::InvalidArgument, "index must be positive");
    if (m > 0 && breaks[m] <= breaks[m - 1]) throw Error(ErrorCode::InvalidArgument, "breaks must be strictly increasing");
    if (m > 0 && indices[m] < indices[m - 1]) throw Error(ErrorCode::InvalidArgument, "indices must be nondecreasing");
  }
}

std::vector<QuotientElement> quotient_elements(const std::vector<NottElem>& gens, int n, long budget) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "level must be >= 0");
  if (gens.empty()) return {QuotientElement{{}, std::nullopt}};
  const FqPtr& k = gens[0].series().ring();
  const int D = gens[0].trunc();
  for (const auto& g : gens)
    if (g.trunc() != D || !g.series().ring()->same_field(*k))
      throw Error(ErrorCode::InvalidArgument, "generators must share field and truncation");

  const auto p = static_cast<std::uint64_t>(k->p());
  std::uint64_t per = 1;
  for (int i = 0; i < n; ++i) {
    per *= p;
    if (per > static_cast<std::uint64_t>(budget)) throw Error(ErrorCode::BudgetExceeded, "p^n exceeds the enumeration budget");
  }
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    total *= per;
    if (total > static_cast<std::uint64_t>(budget))
      throw Error(ErrorCode::BudgetExceeded, "quotient has more than " + std::to_string(budget) + " elements");
  }

  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      if (!(gens[a] * gens[b] == gens[b] * gens[a]))
        throw Error(ErrorCode::NoncommutingGenerators,
                    "generators " + std::to_string(a) + " and " + std::to_string(b) + " do not commute to degree " + std::to_string(D));

  std::vector<std::vector<NottElem>> powers(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    powers[j].push_back(NottElem::identity(k, D));
    for (std::uint64_t a = 1; a < per; ++a) powers[j].push_back(powers[j].back() * gens[j]);
  }

  std::vector<QuotientElement> out(total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<std::uint64_t> ex(gens.size());
    std::uint64_t rest = idx;
    for (std::size_t j = gens.size(); j-- > 0;) {
      ex[j] = rest % per;
      rest /= per;
    }
    NottElem g = powers[0][ex[0]];
    for (std::size_t j = 1; j < gens.size(); ++j)
      if (ex[j] != 0) g = g * powers[j][ex[j]];
    const auto i = ram_number(g);
    if (!i && idx != 0)
      throw Error(ErrorCode::IdentityAtPrecision, "a nontrivial product is the identity to degree " + std::to_string(D));
    out[idx] = QuotientElement{std::move(ex), i};
  });
  return out;
}

FiniteFiltration filtration_from_elements(const std::vector<QuotientElement>& elems, int level, int generators) {
  FiniteFiltration f;
  f.level = level;
  f.generators = generators;
  f.order = static_cast<long>(elems.size());
  std::map<long, long> count;  // i -> number of elements with that i
  for (const auto& e : elems)
    if (e.i) ++count[*e.i];
  long above = f.order;  // elements with i >= current break (identity included)
  for (const auto& [i, c] : count) {
    above -= c;
    f.breaks.push_back(i);
    if (f.order % above != 0) throw Error(ErrorCode::NotIntegral, "lower-numbering subgroup size does not divide the order");
    f.indices.push_back(f.order / above);
  }
  return f;
}

FiniteFiltration finite_quotient_filtration(const std::vector<NottElem>& gens, int n, long budget) {
  return filtration_from_elements(quotient_elements(gens, n, budget), n, static_cast<int>(gens.size()));
}

}  // namespace ramforge
