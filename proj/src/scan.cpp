#include "betashift/scan.hpp"

#include <gmpxx.h>

#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "betashift/approximation.hpp"
#include "betashift/classify.hpp"
#include "betashift/errors.hpp"

namespace betashift {

namespace {

constexpr char kHeader[] =
    "beta,alpha,status,n_used,period_lower,period_upper,b,a,entropy,"
    "err_beta,err_alpha";

// Approximation first; classification as the fallback; anything that still
// throws stays an undetermined row.
ScanRecord scan_cell(const Real& beta, const Real& alpha, double eps,
                     Bits bits) {
  ScanRecord rec;
  rec.beta = beta.str();
  rec.alpha = alpha.str();
  rec.status = "undetermined";
  try {
    const Params params = make_params(beta, alpha);
    try {
      const SftApproximation approx = approximate_sft(params, eps, bits);
      rec.status = "finite_type";
      rec.n_used = approx.n_used;
      rec.period_lower = approx.pair.lower.period_length();
      rec.period_upper = approx.pair.upper.period_length();
      rec.b = approx.target.beta.str();
      rec.a = approx.target.alpha.str();
      rec.entropy = approx.certificate.entropy.str();
      rec.err_beta = approx.err_beta.hi_str();
      rec.err_alpha = approx.err_alpha.hi_str();
      return rec;
    } catch (const Error&) {
      // Fall through to plain classification of the cell itself.
    }
    const Classification cls = classify_shift(params, 512, bits);
    if (cls.pair) {
      rec.period_lower = cls.pair->lower.period_length();
      rec.period_upper = cls.pair->upper.period_length();
    }
    if (cls.kind == ShiftClass::FiniteType) {
      rec.status = "finite_type";
      rec.b = rec.beta;
      rec.a = rec.alpha;
      if (cls.certificate) rec.entropy = cls.certificate->entropy.str();
      rec.err_beta = "0";
      rec.err_alpha = "0";
    } else if (cls.kind == ShiftClass::Sofic) {
      rec.status = "sofic";
      if (cls.report) rec.entropy = cls.report->entropy.str();
    }
  } catch (const std::exception&) {
    // Undetermined row; the grid keeps going.
  }
  return rec;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::size_t parse_count(std::string_view field) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error("scan CSV count field is not a non-negative integer");
  }
  return value;
}

void append_number(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  out += buf;
}

}  // namespace

std::vector<ScanRecord> scan_grid(const ScanGrid& grid, double eps, Bits bits,
                                  std::size_t threads) {
  const std::size_t total = grid.nbeta * grid.nalpha;
  std::vector<ScanRecord> records(total);
  if (total == 0) return records;
  if (!(grid.beta_min > 1.0) || !(grid.beta_max < 2.0) ||
      !(grid.beta_min <= grid.beta_max)) {
    throw DomainError("scan slopes must satisfy 1 < beta_min <= beta_max < 2");
  }

  // Doubles are binary rationals, so the grid coordinates are exact and the
  // records depend only on the grid, not on scheduling or precision drift.
  const mpq_class bmin(grid.beta_min);
  const mpq_class bspan = mpq_class(grid.beta_max) - bmin;
  const auto cell_params = [&](std::size_t cell) {
    const std::size_t i = cell / grid.nalpha;
    const std::size_t j = cell % grid.nalpha;
    mpq_class beta_q = bmin;
    if (grid.nbeta > 1) {
      beta_q += bspan * static_cast<unsigned long>(i) /
                static_cast<unsigned long>(grid.nbeta - 1);
    }
    mpq_class frac(static_cast<unsigned long>(j + 1),
                   static_cast<unsigned long>(grid.nalpha + 1));
    frac.canonicalize();
    const mpq_class alpha_q = frac * (2 - beta_q);
    return std::pair(Real::from_mpq(beta_q, bits),
                     Real::from_mpq(alpha_q, bits));
  };

  std::size_t workers = threads != 0
                            ? threads
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, total);
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    while (true) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= total) return;
      const auto [beta, alpha] = cell_params(cell);
      records[cell] = scan_cell(beta, alpha, eps, bits);
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::string scan_csv(const std::vector<ScanRecord>& records) {
  std::string out = kHeader;
  out += '\n';
  for (const ScanRecord& rec : records) {
    out += rec.beta;
    out += ',';
    out += rec.alpha;
    out += ',';
    out += rec.status;
    out += ',';
    out += std::to_string(rec.n_used);
    out += ',';
    out += std::to_string(rec.period_lower);
    out += ',';
    out += std::to_string(rec.period_upper);
    out += ',';
    out += rec.b;
    out += ',';
    out += rec.a;
    out += ',';
    out += rec.entropy;
    out += ',';
    out += rec.err_beta;
    out += ',';
    out += rec.err_alpha;
    out += '\n';
  }
  return out;
}

std::vector<ScanRecord> parse_scan_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kHeader) {
    throw Error("unrecognized scan CSV header");
  }
  std::vector<ScanRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string_view> fields = split(lines[row], ',');
    if (fields.size() != 11) {
      throw Error("scan CSV row does not have 11 columns");
    }
    ScanRecord rec;
    rec.beta = std::string(fields[0]);
    rec.alpha = std::string(fields[1]);
    rec.status = std::string(fields[2]);
    rec.n_used = parse_count(fields[3]);
    rec.period_lower = parse_count(fields[4]);
    rec.period_upper = parse_count(fields[5]);
    rec.b = std::string(fields[6]);
    rec.a = std::string(fields[7]);
    rec.entropy = std::string(fields[8]);
    rec.err_beta = std::string(fields[9]);
    rec.err_alpha = std::string(fields[10]);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string scan_svg(const std::vector<ScanRecord>& records) {
  // The parameter triangle beta in [1,2], alpha in [0, 2-beta] mapped onto a
  // fixed canvas; finite_type rows plot the recovered point, the rest the
  // source cell.
  constexpr double kSize = 640.0;
  constexpr double kMargin = 48.0;
  const double scale = kSize - 2.0 * kMargin;
  const auto px = [&](double beta) { return kMargin + (beta - 1.0) * scale; };
  const auto py = [&](double alpha) { return kSize - kMargin - alpha * scale; };

  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"640\" viewBox=\"0 0 640 640\">\n";
  out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  out += "<polygon points=\"";
  append_number(out, px(1.0));
  out += ',';
  append_number(out, py(0.0));
  out += ' ';
  append_number(out, px(2.0));
  out += ',';
  append_number(out, py(0.0));
  out += ' ';
  append_number(out, px(1.0));
  out += ',';
  append_number(out, py(1.0));
  out += "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  for (const ScanRecord& rec : records) {
    const bool recovered = rec.status == "finite_type" && !rec.b.empty();
    const std::string& bs = recovered ? rec.b : rec.beta;
    const std::string& as = recovered ? rec.a : rec.alpha;
    const double beta = std::strtod(bs.c_str(), nullptr);
    const double alpha = std::strtod(as.c_str(), nullptr);
    const char* fill = rec.status == "finite_type" ? "#1b9e77"
                       : rec.status == "sofic"     ? "#7570b3"
                                                   : "#d95f02";
    out += "<circle cx=\"";
    append_number(out, px(beta));
    out += "\" cy=\"";
    append_number(out, py(alpha));
    out += "\" r=\"3\" fill=\"";
    out += fill;
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace betashift
