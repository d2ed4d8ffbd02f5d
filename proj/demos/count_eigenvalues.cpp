// Counts Laplacian eigenvalues of a tree in a few intervals of interest,
// reading an edge-list file or falling back to a built-in example.

#include <lapdist/diagonalize.hpp>
#include <lapdist/tree.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  lapdist::Tree t(1, {});
  if (argc > 1) {
    std::ifstream in(argv[1]);
    if (!in) {
      std::cerr << "cannot open " << argv[1] << "\n";
      return 2;
    }
    t = lapdist::parse_edge_list(in);
  } else {
    // a broom: path of four plus three extra leaves at one end
    t = lapdist::Tree(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {3, 6}});
    std::cout << "no input file given; using a built-in 7-vertex broom\n";
  }

  const int n = t.n();
  const lapdist::Rational dn = lapdist::average_degree(n);
  const auto s = lapdist::sigma(t);
  std::cout << "n = " << n << ", average degree d_n = " << dn.str() << "\n";
  std::cout << "eigenvalues in [0, d_n): " << s.m_below
            << "   (guaranteed >= ceil(n/2) = " << (n + 1) / 2 << ")\n";
  std::cout << "eigenvalues in (d_n, n]: " << s.sigma << "\n";

  using lapdist::Rational;
  const struct {
    Rational lo, hi;
    bool lc, hc;
    const char* label;
  } intervals[] = {
      {Rational(0), Rational(1), true, true, "[0, 1]"},
      {Rational(1), Rational(2), false, false, "(1, 2)"},
      {Rational(2), Rational(n), true, true, "[2, n]"},
  };
  for (const auto& iv : intervals)
    std::cout << "eigenvalues in " << iv.label << ": "
              << lapdist::count_interval(t, iv.lo, iv.hi, iv.lc, iv.hc)
              << "\n";
  return 0;
}
