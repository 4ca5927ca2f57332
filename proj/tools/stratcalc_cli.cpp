// stratcalc: command-line front end for presenting, unbending and unfolding
// stratified spaces.
//
// Exit status: 0 success or clean report, 1 violated checks, 2 input errors.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratcalc/fixtures.hpp"
#include "stratcalc/io.hpp"
#include "stratcalc/unbend.hpp"
#include "stratcalc/unfold.hpp"

namespace fs = std::filesystem;
using namespace stratcalc;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kInputError = 2;

struct Options {
  std::string input;
  std::string output;
  bool trace = false;
  bool full = false;
  bool reverse = false;
  bool unbend = false;
  int grid = 0;
  std::uint64_t seed = 0;
  bool seeded = false;
  int count = 20;
  int sign = 1;
  int steps = 1;
};

/// Relative output paths land in STRATCALC_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("STRATCALC_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p;
  }
  return p;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(output_path(o.output), text);
  }
}

GridSpec grid_of(const Options& o) { return o.grid > 0 ? GridSpec::refined(o.grid) : GridSpec{}; }

SpacePtr load_space(const std::string& path) { return io::parse_space(io::read_file(path)).space; }

bool is_morphism_file(const std::string& path) { return fs::path(path).extension() == ".morph"; }

int cmd_present(const Options& o) {
  emit(o, io::write_space(*load_space(o.input)));
  return kOk;
}

int cmd_validate(const Options& o) {
  Report r;
  if (is_morphism_file(o.input)) {
    r = validate_morphism(io::parse_morphism(io::read_file(o.input)), grid_of(o));
  } else {
    auto x = load_space(o.input);
    r.merge(validate_pseudomanifold(*x));
    r.merge(validate_tm(*x));
  }
  emit(o, io::write_report(r, fs::path(o.input).filename().string()));
  for (const auto& v : r.violations) std::cerr << v.code << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  return r.ok() ? kOk : kViolated;
}

int cmd_unbend(const Options& o) {
  auto r = unbend_space(load_space(o.input), {o.reverse});
  emit(o, io::write_unbending(r));
  return kOk;
}

int cmd_unfold(const Options& o) {
  auto u = unfold_space(load_space(o.input), {o.reverse});
  if (o.trace) {
    fs::path dir = o.output.empty() ? output_path(".") : output_path(o.output).parent_path();
    if (dir.empty()) dir = ".";
    const std::string stem = fs::path(o.input).stem().string();
    for (int k = 0; k < u->steps(); ++k) {
      fs::path step = dir / (stem + ".step" + std::to_string(k + 1) + ".unbend");
      io::write_file_atomic(step, io::write_unbending(u->trace[k]));
      std::cerr << "wrote " << step.string() << "\n";
    }
  }
  emit(o, o.full ? io::write_unfolding(*u) : io::write_space(*u->final));
  return kOk;
}

int cmd_lift(const Options& o) {
  const GridSpec grid = grid_of(o);
  StratMorphism f = io::parse_morphism(io::read_file(o.input));
  Report squares;
  StratMorphism lifted;
  if (o.steps <= 1) {
    auto from = unbend_space(f.domain);
    auto to = unbend_space(f.codomain);
    lifted = lift_morphism(f, from, to, o.sign, grid).lifted;
    squares = check_lift_square(f, lifted, from, to, grid);
  } else {
    auto from = unfold_space(f.domain);
    auto to = unfold_space(f.codomain);
    auto l = lift_to_unfolding(f, *from, *to, grid, o.steps);
    lifted = l.final;
    squares = check_unfolded_squares(f, l, *from, *to, grid);
  }
  emit(o, io::write_morphism(lifted));
  for (const auto& v : squares.violations) std::cerr << v.code << ": " << v.detail << "\n";
  return squares.ok() ? kOk : kViolated;
}

int cmd_check_functor(const Options& o) {
  std::vector<HarnessSpace> spaces;
  std::vector<StratMorphism> morphisms;
  // Equal spaces read from different files share one pointer so that their
  // unfoldings are computed once.
  auto intern = [&](SpacePtr x) {
    for (const auto& s : spaces) {
      if (s.space == x || structurally_equal(*s.space, *x)) return s.space;
    }
    return x;
  };
  if (!o.input.empty()) {
    if (!fs::is_directory(o.input)) throw Error(ErrorCode::InvalidInput, o.input + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.input)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      if (p.extension() == ".space") spaces.push_back({p.stem().string(), intern(load_space(p.string()))});
    }
    for (const auto& p : files) {
      if (p.extension() != ".morph") continue;
      StratMorphism f = io::parse_morphism(io::read_file(p));
      f.domain = intern(f.domain);
      f.codomain = intern(f.codomain);
      morphisms.push_back(std::move(f));
    }
  }
  if (o.seeded) {
    for (auto& g : fixtures::generate_corpus(o.seed, o.count)) spaces.push_back({g.name, g.space});
  }
  if (spaces.empty() && morphisms.empty()) throw Error(ErrorCode::InvalidInput, "empty corpus");
  auto report = functor_harness(spaces, morphisms, grid_of(o));
  emit(o, io::write_harness(report));
  for (const auto& r : report.outcomes) {
    if (!r.pass) std::cerr << "FAIL " << r.law << " " << r.subject << ": " << r.detail << "\n";
  }
  return report.ok() ? kOk : kViolated;
}

int cmd_check_unbend(const Options& o) {
  const GridSpec grid = grid_of(o);
  auto r = unbend_space(load_space(o.input), {o.reverse});
  Report all;
  all.merge(check_double_cover(r), "double cover");
  all.merge(check_unbending_is_tm(r, grid), "tubes");
  all.merge(check_chart_squares(r, grid), "chart squares");
  emit(o, io::write_report(all, fs::path(o.input).filename().string()));
  return all.ok() ? kOk : kViolated;
}

int cmd_export_dot(const Options& o) {
  auto x = load_space(o.input);
  if (o.unbend) {
    auto r = unbend_space(x, {o.reverse});
    emit(o, io::to_dot(*r.unbent, &r.map));
  } else {
    emit(o, io::to_dot(*x));
  }
  return kOk;
}

int cmd_generate(const Options& o) {
  if (o.output.empty()) throw Error(ErrorCode::InvalidInput, "generate needs -o <directory>");
  fs::path dir = output_path(o.output);
  for (const auto& g : fixtures::generate_corpus(o.seed, o.count)) {
    io::write_file_atomic(dir / (g.name + ".space"), io::write_space(*g.space));
  }
  return kOk;
}

void write_morphism_file(const fs::path& dir, const StratMorphism& f) {
  io::write_file_atomic(dir / (f.name + ".morph"), io::write_morphism(f));
}

/// The shipped reference spaces and morphisms.
int cmd_fixtures(const Options& o) {
  if (o.output.empty()) throw Error(ErrorCode::InvalidInput, "fixtures needs -o <directory>");
  fs::path dir = output_path(o.output);
  using E = StratSpaceExpr;
  const E circle = E::smooth("S1", 1, true);
  const E sigma = E::suspension(E::smooth("N", 1, true));
  io::write_file_atomic(dir / "smooth.space", io::write_space(E::smooth("M", 2, true)));
  io::write_file_atomic(dir / "cone.space", io::write_space(E::cone(circle)));
  io::write_file_atomic(dir / "cone2.space", io::write_space(E::cone(sigma)));
  io::write_file_atomic(dir / "sigma.space", io::write_space(sigma));
  io::write_file_atomic(dir / "line-cone.space", io::write_space(E::product({"U", 1, false}, E::cone(circle))));
  io::write_file_atomic(dir / "bundle.space", io::write_space(*fixtures::twisted_bundle()));

  auto cone = fixtures::cone_circle();
  auto cone2 = fixtures::cone_sigma();
  const StratumId vertex = StratumId::parse("v");
  for (int shift : {1, 2, 3, 5}) {
    auto f = fixtures::link_rotation(cone, vertex, shift);
    f.name = "rot" + std::to_string(shift);
    write_morphism_file(dir, f);
  }
  auto id = identity_morphism(cone);
  id.name = "id-cone";
  write_morphism_file(dir, id);
  auto swap = fixtures::pole_swap(fixtures::sigma_circle());
  swap.name = "pole-swap";
  write_morphism_file(dir, swap);
  auto twist = fixtures::bundle_twist(fixtures::twisted_bundle());
  twist.name = "twist";
  write_morphism_file(dir, twist);
  auto embed = fixtures::cone_embedding(cone, cone2);
  embed.name = "embed";
  write_morphism_file(dir, embed);
  auto spin = fixtures::link_rotation(cone2, vertex, 4);
  spin.name = "spin";
  write_morphism_file(dir, spin);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbendings and unfoldings of Thom-Mather stratified spaces"};
  app.require_subcommand(1);
  Options o;
  int (*command)(const Options&) = nullptr;

  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
  };
  auto output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output path (default: stdout)"); };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "Sample density: lattice points per axis")->check(CLI::Range(2, 64));
  };
  auto reverse = [&](CLI::App* sub) {
    sub->add_flag("--reverse", o.reverse, "Process minimal strata in reverse id order");
  };

  auto* present = app.add_subcommand("present", "Normal form of a space document");
  input(present, "Space document");
  output(present);
  present->callback([&] { command = cmd_present; });

  auto* validate = app.add_subcommand("validate", "Validate a space (.space) or morphism (.morph)");
  input(validate, "Space or morphism document");
  output(validate);
  grid(validate);
  validate->callback([&] { command = cmd_validate; });

  auto* unbend = app.add_subcommand("unbend", "Unbend the minimal part of a space");
  input(unbend, "Space document");
  output(unbend);
  reverse(unbend);
  unbend->callback([&] { command = cmd_unbend; });

  auto* unfold = app.add_subcommand("unfold", "Iterate unbendings down to a manifold");
  input(unfold, "Space document");
  output(unfold);
  reverse(unfold);
  unfold->add_flag("--trace", o.trace, "Write one unbending document per step");
  unfold->add_flag("--full", o.full, "Emit the whole unfolding document instead of the final manifold");
  unfold->callback([&] { command = cmd_unfold; });

  auto* lift = app.add_subcommand("lift", "Lift a morphism to the unbendings or unfoldings");
  input(lift, "Morphism document");
  output(lift);
  grid(lift);
  lift->add_option("--sign", o.sign, "Sign of the lift (+1 or -1)")->check(CLI::IsMember({-1, 1}));
  lift->add_option("--steps", o.steps, "1 for the unbending, more for the padded unfolding")->check(CLI::Range(1, 16));
  lift->callback([&] { command = cmd_lift; });

  auto* check = app.add_subcommand("check", "Run a law harness");
  check->require_subcommand(1);
  auto* functor = check->add_subcommand("functor", "Functor laws over a corpus directory");
  functor->add_option("input", o.input, "Directory of .space and .morph files");
  output(functor);
  grid(functor);
  functor->add_option("--seed", o.seed, "Add generated spaces from this seed")->each([&](const std::string&) {
    o.seeded = true;
  });
  functor->add_option("--count", o.count, "Number of generated spaces")->check(CLI::Range(1, 10000));
  functor->callback([&] { command = cmd_check_functor; });
  auto* check_unbend = check->add_subcommand("unbend", "Double cover, tube and chart-square checks");
  input(check_unbend, "Space document");
  output(check_unbend);
  grid(check_unbend);
  reverse(check_unbend);
  check_unbend->callback([&] { command = cmd_check_unbend; });

  auto* dot = app.add_subcommand("export-dot", "Incidence poset as a DOT graph");
  input(dot, "Space document");
  output(dot);
  reverse(dot);
  dot->add_flag("--unbend", o.unbend, "Export the unbent space with provenance annotations");
  dot->callback([&] { command = cmd_export_dot; });

  auto* generate = app.add_subcommand("generate", "Write a generated corpus of valid spaces");
  generate->add_option("--seed", o.seed, "Generator seed")->required();
  generate->add_option("--count", o.count, "Number of spaces")->check(CLI::Range(1, 10000));
  output(generate);
  generate->callback([&] { command = cmd_generate; });

  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write the reference spaces and morphisms");
  output(fixtures_cmd);
  fixtures_cmd->callback([&] { command = cmd_fixtures; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return command(o);
  } catch (const io::ParseError& e) {
    std::cerr << o.input << ": " << e.what() << " (at " << e.pointer() << ")\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.detail() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
