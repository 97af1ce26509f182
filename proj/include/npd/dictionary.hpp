#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "npd/errors.hpp"
#include "npd/numtheory.hpp"
#include "npd/support.hpp"

namespace npd {

enum class DictionaryFamily { Rpt, Farey };

inline std::string family_name(DictionaryFamily f) {
  return f == DictionaryFamily::Rpt ? "rpt" : "farey";
}

inline DictionaryFamily family_from_name(const std::string& s) {
  if (s == "rpt") return DictionaryFamily::Rpt;
  if (s == "farey") return DictionaryFamily::Farey;
  throw MalformedFile("unknown dictionary family '" + s + "'");
}

/// L x N nested periodic dictionary. Column j spans the period-q subspace for
/// q = atom_period[j]; columns are grouped by period (block C_q occupies the
/// indices I_q). RPT entries are real-valued integers before normalization.
struct NpdDictionary {
  DictionaryFamily family = DictionaryFamily::Rpt;
  int L = 0;
  int p_max = 0;
  bool normalized = false;
  Eigen::MatrixXcd entries;      // L x N
  std::vector<int> atom_period;  // per column

  int rows() const { return static_cast<int>(entries.rows()); }
  int atoms() const { return static_cast<int>(entries.cols()); }
  bool is_real() const { return family == DictionaryFamily::Rpt; }

  /// Column by 1-based atom index.
  Eigen::MatrixXcd::ConstColXpr atom(int j) const { return entries.col(j - 1); }
};

/// One period-q block: phi(q) columns of length `rows`.
/// RPT: the circular downshifts of the length-q Ramanujan cycle c_q, extended
/// periodically. Farey: columns e^{j 2 pi k n / q} for each k coprime to q.
inline Eigen::MatrixXcd build_Cq(DictionaryFamily family, int q, int rows) {
  const int phi = static_cast<int>(totient(q));
  Eigen::MatrixXcd block(rows, phi);
  if (family == DictionaryFamily::Rpt) {
    std::vector<double> cycle(static_cast<std::size_t>(q));
    for (int n = 0; n < q; ++n) cycle[static_cast<std::size_t>(n)] = static_cast<double>(ramanujan_sum(q, n));
    for (int i = 0; i < phi; ++i) {
      for (int r = 0; r < rows; ++r) {
        block(r, i) = cycle[static_cast<std::size_t>(((r - i) % q + q) % q)];
      }
    }
  } else {
    int col = 0;
    for (int k = 1; k <= q; ++k) {
      if (std::gcd(k, q) != 1) continue;
      for (int n = 0; n < rows; ++n) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(n % q) / static_cast<double>(q);
        block(n, col) = std::complex<double>(std::cos(arg), std::sin(arg));
      }
      ++col;
    }
  }
  return block;
}

/// p x p nested periodic matrix: blocks C_q over the divisors q of p
/// in increasing order. Full rank for both families.
inline Eigen::MatrixXcd build_npm(DictionaryFamily family, int p) {
  Eigen::MatrixXcd npm(p, p);
  int col = 0;
  for (std::int64_t q : divisors(p)) {
    const auto block = build_Cq(family, static_cast<int>(q), p);
    npm.middleCols(col, block.cols()) = block;
    col += static_cast<int>(block.cols());
  }
  return npm;
}

/// Assemble the L x N dictionary by stacking the period-p blocks for
/// p = 1..p_max. Normalization divides each column by its l2 norm, which
/// depends on L whenever L is not a multiple of the column period.
inline NpdDictionary build_npd(DictionaryFamily family, int p_max, int L, bool normalize = true) {
  std::int64_t n_atoms = 0;
  for (int p = 1; p <= p_max; ++p) n_atoms += totient(p);

  NpdDictionary d;
  d.family = family;
  d.L = L;
  d.p_max = p_max;
  d.normalized = normalize;
  d.entries.resize(L, n_atoms);
  d.atom_period.reserve(static_cast<std::size_t>(n_atoms));

  int col = 0;
  for (int p = 1; p <= p_max; ++p) {
    const auto block = build_Cq(family, p, L);
    d.entries.middleCols(col, block.cols()) = block;
    for (int i = 0; i < block.cols(); ++i) d.atom_period.push_back(p);
    col += static_cast<int>(block.cols());
  }
  if (normalize) {
    for (int j = 0; j < d.atoms(); ++j) d.entries.col(j) /= d.entries.col(j).norm();
  }
  return d;
}

namespace detail {

inline std::string format_entry(const std::complex<double>& z) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", z.real());
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline std::complex<double> parse_entry(const std::string& tok, int line_no) {
  const auto fail = [&]() {
    throw MalformedFile("line " + std::to_string(line_no) + ": bad entry '" + tok + "'");
  };
  if (tok.empty()) fail();
  const bool has_i = tok.back() == 'i';
  std::string body = has_i ? tok.substr(0, tok.size() - 1) : tok;
  if (body.empty()) fail();
  if (!has_i) {
    std::size_t pos = 0;
    double re = 0.0;
    try {
      re = std::stod(body, &pos);
    } catch (const std::exception&) {
      fail();
    }
    if (pos != body.size()) fail();
    return {re, 0.0};
  }
  // Split "a+bi" / "a-bi" at the sign starting the imaginary part: the last
  // '+'/'-' that is not the leading sign and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) fail();
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string re_s = body.substr(0, split);
    const std::string im_s = body.substr(split);
    const double re = std::stod(re_s, &p1);
    const double im = std::stod(im_s, &p2);
    if (p1 != re_s.size() || p2 != im_s.size()) fail();
    return {re, im};
  } catch (const std::exception&) {
    fail();
  }
  return {};
}

}  // namespace detail

/// Text format, one row per line:
///   npd v1 family=<rpt|farey> L=<L> pmax=<P> normalized=<0|1>
///   <e11>,<e12>,...   (entries as <re> or <re>+<im>i with 17 significant digits)
inline void export_dictionary(const NpdDictionary& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "npd v1 family=" << family_name(d.family) << " L=" << d.L << " pmax=" << d.p_max
      << " normalized=" << (d.normalized ? 1 : 0) << "\n";
  for (int r = 0; r < d.rows(); ++r) {
    for (int c = 0; c < d.atoms(); ++c) {
      if (c) out << ',';
      out << detail::format_entry(d.entries(r, c));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline NpdDictionary import_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string header;
  if (!std::getline(in, header)) throw MalformedFile("line 1: missing header");
  NpdDictionary d;
  {
    char fam[16] = {0};
    int L = 0, pmax = 0, norm = 0;
    if (std::sscanf(header.c_str(), "npd v1 family=%15s L=%d pmax=%d normalized=%d", fam, &L,
                    &pmax, &norm) != 4 ||
        L < 1 || pmax < 1 || (norm != 0 && norm != 1)) {
      throw MalformedFile("line 1: bad header '" + header + "'");
    }
    d.family = family_from_name(fam);
    d.L = L;
    d.p_max = pmax;
    d.normalized = norm == 1;
  }

  std::int64_t n_atoms = 0;
  for (int p = 1; p <= d.p_max; ++p) n_atoms += totient(p);
  d.entries.resize(d.L, n_atoms);
  for (int p = 1; p <= d.p_max; ++p) {
    for (std::int64_t i = 0; i < totient(p); ++i) d.atom_period.push_back(p);
  }

  std::string line;
  for (int r = 0; r < d.L; ++r) {
    const int line_no = r + 2;
    if (!std::getline(in, line)) {
      throw MalformedFile("line " + std::to_string(line_no) + ": truncated file, expected " +
                          std::to_string(d.L) + " rows");
    }
    std::int64_t c = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      const std::string tok =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (c >= n_atoms) {
        throw MalformedFile("line " + std::to_string(line_no) + ": too many entries");
      }
      d.entries(r, c++) = detail::parse_entry(tok, line_no);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (c != n_atoms) {
      throw MalformedFile("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(n_atoms) + " entries, got " + std::to_string(c));
    }
  }
  return d;
}

}  // namespace npd
