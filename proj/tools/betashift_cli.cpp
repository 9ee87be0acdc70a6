#include <CLI11.hpp>
#include <gmpxx.h>
#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "betashift/approximation.hpp"
#include "betashift/classify.hpp"
#include "betashift/dynamics.hpp"
#include "betashift/errors.hpp"
#include "betashift/scan.hpp"
#include "betashift/serialize.hpp"

namespace {

using namespace betashift;
using nlohmann::json;

// Command-line reals are decimal strings or p/q rationals.
Real parse_real(const std::string& text, Bits bits) {
  const std::size_t slash = text.find('/');
  if (slash == std::string::npos) return Real::decimal(text, bits);
  try {
    const mpz_class num(text.substr(0, slash));
    const mpz_class den(text.substr(slash + 1));
    if (den == 0) {
      throw DomainError("rational with zero denominator: \"" + text + "\"");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return Real::from_mpq(q, bits);
  } catch (const std::invalid_argument&) {
    throw DomainError("not a number: \"" + text + "\"");
  }
}

Side parse_side(const std::string& text) {
  if (text == "minus") return Side::Minus;
  if (text == "plus") return Side::Plus;
  throw DomainError("side must be \"minus\" or \"plus\"");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw DomainError("failed writing \"" + path + "\"");
}

struct GlobalOptions {
  Bits bits = kDefaultBits;
  std::size_t max_len = 512;
  bool json_output = false;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intermediate beta-transformation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key = value file mirroring the flags");
  app.get_config_formatter_base()->valueSeparator('=');

  GlobalOptions global;
  app.add_option("--bits", global.bits, "Working precision in bits")
      ->capture_default_str()
      ->check(CLI::Range(Bits{16}, kMaxBits));
  app.add_option("--max-len", global.max_len,
                 "Orbit horizon for kneading detection")
      ->capture_default_str();
  app.add_flag("--json", global.json_output,
               "Emit JSON instead of plain text where both exist");

  std::string opt_beta;
  std::string opt_alpha = "0";
  std::string opt_x;
  std::string opt_side = "minus";
  std::string opt_word1;
  std::string opt_word2;
  std::string opt_csv;
  std::string opt_svg;
  std::size_t opt_n = 0;
  double opt_eps = 1e-2;
  ScanGrid opt_grid;
  std::size_t opt_threads = 0;

  const auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--beta", opt_beta, "Slope in (1, 2)")->required();
    cmd->add_option("--alpha", opt_alpha, "Offset in [0, 2 - beta]")
        ->capture_default_str();
  };

  CLI::App* cmd_expand =
      app.add_subcommand("expand", "Itinerary digits of a point");
  add_params(cmd_expand);
  cmd_expand->add_option("--x", opt_x, "Point in [0, 1]")->required();
  cmd_expand->add_option("--n", opt_n, "Number of digits")->required();
  cmd_expand->add_option("--side", opt_side, "Branch at ties: minus or plus")
      ->capture_default_str();
  cmd_expand->callback([&] {
    const Params params =
        make_params(parse_real(opt_beta, global.bits),
                    parse_real(opt_alpha, global.bits));
    const Real x = parse_real(opt_x, global.bits);
    const Real zero(global.bits);
    const Real one = Real::integer(1, global.bits);
    if (compare_decide(x, zero) == Decision::Less ||
        compare_decide(x, one) == Decision::Greater) {
      throw DomainError("x must lie in [0, 1]");
    }
    const FiniteWord digits =
        expand(params, x, parse_side(opt_side), opt_n);
    if (global.json_output) {
      emit(json{{"digits", digits.str()}});
    } else {
      std::cout << digits.str() << '\n';
    }
  });

  CLI::App* cmd_kneading = app.add_subcommand(
      "kneading", "Kneading invariants of the critical point");
  add_params(cmd_kneading);
  cmd_kneading->add_option(
      "--n", opt_n, "Print this many digits instead of detecting a period");
  cmd_kneading->callback([&] {
    const Params params =
        make_params(parse_real(opt_beta, global.bits),
                    parse_real(opt_alpha, global.bits));
    if (opt_n > 0) {
      const FiniteWord lower = kneading(params, Side::Minus, opt_n);
      const FiniteWord upper = kneading(params, Side::Plus, opt_n);
      if (global.json_output) {
        emit(json{{"lower", lower.str()}, {"upper", upper.str()}});
      } else {
        std::cout << "lower: " << lower.str() << '\n'
                  << "upper: " << upper.str() << '\n';
      }
      return;
    }
    const auto lower =
        detect_kneading_period(params, Side::Minus, global.max_len, global.bits);
    const auto upper =
        detect_kneading_period(params, Side::Plus, global.max_len, global.bits);
    if (!lower || !upper) {
      throw PrecisionExhausted(
          "no eventually periodic kneading invariant detected within the "
          "orbit horizon; raise --max-len or pass --n for a plain prefix");
    }
    if (global.json_output) {
      emit(json{{"lower", lower->str()}, {"upper", upper->str()}});
    } else {
      std::cout << "lower: " << lower->str() << '\n'
                << "upper: " << upper->str() << '\n';
    }
  });

  CLI::App* cmd_check =
      app.add_subcommand("check", "Admissibility of a kneading pair");
  cmd_check->add_option("lower", opt_word1, "Lower word, e.g. \"(011)\"")
      ->required();
  cmd_check->add_option("upper", opt_word2, "Upper word, e.g. \"(100)\"")
      ->required();
  cmd_check->callback([&] {
    const WordPair pair{EventuallyPeriodicWord::parse(opt_word1),
                        EventuallyPeriodicWord::parse(opt_word2)};
    emit(report_json(is_admissible(pair, global.bits)));
  });

  CLI::App* cmd_classify =
      app.add_subcommand("classify", "Symbolic class of a parameter point");
  add_params(cmd_classify);
  cmd_classify->callback([&] {
    const Params params =
        make_params(parse_real(opt_beta, global.bits),
                    parse_real(opt_alpha, global.bits));
    emit(classification_json(
        classify_shift(params, global.max_len, global.bits)));
  });

  CLI::App* cmd_approx = app.add_subcommand(
      "approx", "Nearby finite-type parameters with certified errors");
  add_params(cmd_approx);
  cmd_approx->add_option("--eps", opt_eps, "Error tolerance")
      ->capture_default_str();
  cmd_approx->callback([&] {
    const Params params =
        make_params(parse_real(opt_beta, global.bits),
                    parse_real(opt_alpha, global.bits));
    if (params.boundary != BoundaryKind::Interior) {
      std::cerr << "boundary parameters approximate nothing new; the class "
                   "is decided by the free kneading word alone, so this "
                   "routes to classification\n";
      emit(classification_json(
          classify_shift(params, global.max_len, global.bits)));
      return;
    }
    emit(approximation_json(approximate_sft(params, opt_eps, global.bits)));
  });

  CLI::App* cmd_scan =
      app.add_subcommand("scan", "Sweep a parameter grid into CSV and SVG");
  cmd_scan->add_option("--nbeta", opt_grid.nbeta, "Grid cells per slope row")
      ->capture_default_str();
  cmd_scan->add_option("--nalpha", opt_grid.nalpha, "Grid cells per offset column")
      ->capture_default_str();
  cmd_scan->add_option("--beta-min", opt_grid.beta_min, "Smallest slope")
      ->capture_default_str();
  cmd_scan->add_option("--beta-max", opt_grid.beta_max, "Largest slope")
      ->capture_default_str();
  cmd_scan->add_option("--eps", opt_eps, "Per-cell error tolerance")
      ->capture_default_str();
  cmd_scan->add_option("--csv", opt_csv, "CSV output path")->required();
  cmd_scan->add_option("--svg", opt_svg, "Optional SVG scatter path");
  cmd_scan->add_option("--threads", opt_threads,
                       "Worker threads; 0 picks the hardware concurrency")
      ->capture_default_str();
  cmd_scan->callback([&] {
    const auto records =
        scan_grid(opt_grid, opt_eps, global.bits, opt_threads);
    write_file(opt_csv, scan_csv(records));
    if (!opt_svg.empty()) write_file(opt_svg, scan_svg(records));
    std::size_t finite = 0, sofic = 0, undetermined = 0;
    for (const ScanRecord& rec : records) {
      if (rec.status == "finite_type") ++finite;
      else if (rec.status == "sofic") ++sofic;
      else ++undetermined;
    }
    if (global.json_output) {
      emit(json{{"cells", records.size()},
                {"finite_type", finite},
                {"sofic", sofic},
                {"undetermined", undetermined},
                {"csv", opt_csv},
                {"svg", opt_svg.empty() ? json(nullptr) : json(opt_svg)}});
    } else {
      std::cout << records.size() << " cells: " << finite << " finite_type, "
                << sofic << " sofic, " << undetermined << " undetermined\n";
    }
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const ReductionFailed& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return 2;
  } catch (const EscalationFailed& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return 2;
  } catch (const CallbackExhausted& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return 2;
  } catch (const NoProgress& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
