#pragma once

// The CLI golden suite: deterministic inputs, a fixed list of invocations, and
// everything each one writes (artifacts, stdout, exit status) collected per case.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ramforge/cli.hpp"

namespace golden {

using namespace ramforge;
namespace fs = std::filesystem;

struct Case {
  std::string name;
  std::vector<std::string> args;  // "{in}" is replaced by the inputs directory
  int exit_code;
};

inline void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_doc(const fs::path& p, const Json& j) { write_text(p, j.dump(2) + "\n"); }

inline OKRingPtr ring(int p, int f, int e, int N) { return OKRing::make(RingSpec::standard(p, f, e, N)); }

inline void write_family(const fs::path& dir, const std::string& tag, int p, std::vector<std::int64_t> psi0, int beta,
                         int prec) {
  const int D = 64, N = 8;
  auto R = ring(p, 1, 1, prec);
  auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, N);
  ConjugatedFamily fam(G, Series<OKElem>::from_ints(R, D, psi0));
  write_doc(dir / ("g_" + tag + ".json"), to_json(fam.member(R->from_int(beta))));
  Json o{{"format", kFormatVersion}, {"kind", "conjugated_family"}};
  o["psi0"] = to_json(fam.psi0());
  write_doc(dir / ("family_" + tag + ".json"), o);
}

inline void write_inputs(const fs::path& dir) {
  fs::create_directories(dir);
  auto F2 = Fq::make(2, 1, {1});
  write_doc(dir / "sigma.json", to_json(Series<FqElem>::from_ints(F2, 64, {1, 1})));
  Json broken = to_json(Series<FqElem>::from_ints(F2, 8, {1, 1}));
  broken["coeffs"][5] = Json::array({1, 1});
  write_doc(dir / "broken.json", broken);

  write_doc(dir / "filt_a.json", to_json(synthetic_filtration(2, 2, 4)));
  write_doc(dir / "filt_b.json", to_json(synthetic_filtration(2, 3, 5)));

  write_family(dir, "z2", 2, {1, 2, 2}, 2, working_precision(8, 2, 64));
  write_family(dir, "z3", 3, {1, 3, 3}, 9, working_precision(8, 3, 64));
  // ring too coarse for degree 64
  write_family(dir, "coarse", 2, {1, 2, 2}, 2, 8);

  auto R4 = ring(2, 2, 1, 8);
  auto G4 = FormalGroupLaw::build(FrobeniusSeries::standard(R4), 4, 8);
  const OKElem w = R4->omega();
  write_doc(dir / "g_case1.json", to_json(G4->endo(R4->from_int(2) * w, 12)));
  write_doc(dir / "u_case1.json", to_json(G4->endo(w, 12)));
  write_doc(dir / "g_case1_bad.json", to_json(G4->endo(R4->from_int(4), 12)));

  auto R2 = ring(2, 1, 1, 8);
  Json F = to_json(*FormalGroupLaw::build(FrobeniusSeries::standard(R2), 5, 8));
  for (auto& term : F["law"])
    if (term["i"] == 1 && term["j"] == 1) term["c"]["v"] = 3;
  write_doc(dir / "F_tampered.json", F);
}

inline const std::vector<Case>& cases() {
  static const std::vector<Case> all = {
      {"ring_info", {"ring", "info", "--p", "3", "--f", "2", "--N", "4"}, 0},
      {"lt_build", {"lt", "build", "--p", "2", "--f", "1", "--e", "1", "--N", "16", "--T", "6"}, 0},
      {"lt_build_ramified", {"lt", "build", "--ring", "3,1,2", "--N", "8", "--T", "5"}, 0},
      {"lt_endo", {"lt", "endo", "--p", "3", "--N", "8", "--alpha", "4", "--deg", "12"}, 0},
      {"lt_reduce", {"lt", "reduce", "--p", "2", "--f", "2", "--N", "8", "--T", "6", "--alpha", "5", "--deg", "32"}, 0},
      {"lt_check", {"lt", "check", "--p", "2", "--e", "2", "--N", "8", "--T", "5", "--deg", "16"}, 0},
      {"lt_check_tampered", {"lt", "check", "--input", "{in}/F_tampered.json"}, 5},
      {"ram_profile", {"ram", "profile", "--series", "{in}/sigma.json", "--nmax", "2"}, 0},
      {"ram_profile_short", {"ram", "profile", "--series", "{in}/sigma.json", "--nmax", "5"}, 3},
      {"ram_profile_schema", {"ram", "profile", "--series", "{in}/broken.json"}, 2},
      {"ram_filtration", {"ram", "filtration", "--series", "1,1", "--deg", "64", "--n", "2"}, 0},
      {"herbrand_phi", {"herbrand", "phi", "--q", "3", "--r", "2", "--lmax", "4"}, 0},
      {"herbrand_breaks", {"herbrand", "breaks", "--filtration", "{in}/filt_a.json"}, 0},
      {"herbrand_window", {"herbrand", "window", "--filtration", "{in}/filt_a.json", "--filtration", "{in}/filt_b.json"}, 0},
      {"criterion_check", {"criterion", "check", "--p", "2", "--f", "1", "--e", "1", "--alpha", "5", "--nmax", "2"}, 0},
      {"criterion_check_f4", {"criterion", "check", "--ring", "2,2,1", "--alpha", "5", "--nmax", "2"}, 0},
      {"criterion_check_char_p", {"criterion", "check", "--series", "1,1", "--deg", "256", "--nmax", "3"}, 4},
      {"criterion_predict", {"criterion", "predict", "--p", "3", "--l", "2", "--n", "2"}, 0},
      {"criterion_closed_form", {"criterion", "predict", "--closed-form", "--i0", "3", "--i1", "7", "--d", "1", "--p", "2", "--n", "3"}, 0},
      {"lift_zspace", {"lift", "zspace", "--p", "2", "--zeta", "0,1", "--mu", "1,1,1", "--deg", "16"}, 0},
      {"lift_rectify_z2", {"lift", "rectify", "--input", "{in}/g_z2.json", "--oracle", "{in}/family_z2.json", "--target", "8"}, 0},
      {"lift_rectify_z3", {"lift", "rectify", "--input", "{in}/g_z3.json", "--oracle", "{in}/family_z3.json", "--target", "8"}, 0},
      {"lift_rectify_coarse", {"lift", "rectify", "--input", "{in}/g_coarse.json", "--oracle", "{in}/family_coarse.json", "--target", "8"}, 3},
      {"lift_case1", {"lift", "case1", "--input", "{in}/g_case1.json", "--u", "{in}/u_case1.json"}, 0},
      {"lift_case1_unstable", {"lift", "case1", "--input", "{in}/g_case1_bad.json", "--u", "{in}/u_case1.json"}, 4},
      {"bad_option", {"lt", "build", "--p"}, 2},
  };
  return all;
}

struct Outcome {
  int exit_code;
  std::map<std::string, std::string> files;  // name -> bytes, including stdout.txt
};

/// Runs every case with --outdir root/<name>; inputs go to root/inputs.
inline std::map<std::string, Outcome> run_suite(const fs::path& root) {
  fs::remove_all(root);
  const fs::path in = root / "inputs";
  write_inputs(in);
  std::map<std::string, Outcome> res;
  for (const Case& c : cases()) {
    const fs::path out = root / c.name;
    fs::create_directories(out);
    std::vector<std::string> args;
    for (std::string a : c.args) {
      if (const auto k = a.find("{in}"); k != std::string::npos) a.replace(k, 4, in.string());
      args.push_back(a);
    }
    if (c.name != "bad_option") {
      args.push_back("--outdir");
      args.push_back(out.string());
    }
    std::ostringstream so, se;
    Outcome o{run(args, so, se), {}};
    write_text(out / "stdout.txt", so.str());
    for (const auto& e : fs::directory_iterator(out)) o.files[e.path().filename().string()] = read_text(e.path());
    res[c.name] = std::move(o);
  }
  return res;
}

}  // namespace golden
