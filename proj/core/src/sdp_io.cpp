#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "tsqkd/sdp.hpp"

namespace tsqkd::sdp {

namespace {

void write_matrix(std::ostream& out, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << m(i, j).real() << ' ' << m(i, j).imag();
    }
    out << '\n';
  }
}

CMatrix read_matrix(std::istream& in, int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = 0, im = 0;
      if (!(in >> re >> im)) throw ParameterError("SDP dump: truncated matrix data");
      m(i, j) = {re, im};
    }
  return m;
}

}  // namespace

void write_problem(std::ostream& out, const Problem& problem) {
  problem.validate();
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "tsqkd-sdp " << problem.blocks() << ' ' << problem.constraints.size() << '\n';
  for (int b = 0; b < problem.blocks(); ++b) out << (b ? " " : "") << problem.objective[b].rows();
  out << '\n';
  for (const auto& c : problem.objective) write_matrix(out, c);
  for (size_t i = 0; i < problem.constraints.size(); ++i) {
    out << problem.rhs[i] << '\n';
    for (const auto& a : problem.constraints[i]) write_matrix(out, a);
  }
  out << std::setprecision(static_cast<int>(precision));
}

Problem read_problem(std::istream& in) {
  std::string magic;
  int blocks = 0, constraints = 0;
  if (!(in >> magic >> blocks >> constraints) || magic != "tsqkd-sdp" || blocks <= 0 || constraints < 0) {
    throw ParameterError("SDP dump: bad header");
  }
  std::vector<int> sizes(blocks);
  for (int& s : sizes) {
    if (!(in >> s) || s <= 0) throw ParameterError("SDP dump: bad block size");
  }
  Problem p;
  for (int s : sizes) p.objective.push_back(read_matrix(in, s));
  for (int i = 0; i < constraints; ++i) {
    double rhs = 0;
    if (!(in >> rhs)) throw ParameterError("SDP dump: missing rhs");
    Problem::Blocks a;
    for (int s : sizes) a.push_back(read_matrix(in, s));
    p.add_constraint(std::move(a), rhs);
  }
  p.validate();
  return p;
}

}  // namespace tsqkd::sdp
