#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "rigel/graded.hpp"
#include "rigel/rational.hpp"

using namespace rigel;

namespace {

GenTablePtr even_table(int cap) {
  return std::make_shared<GenTable>(
      std::vector<Generator>{{"y", 2, false}}, cap);
}

GenTablePtr mixed_table(int cap) {
  return std::make_shared<GenTable>(
      std::vector<Generator>{
          {"a", 1, true}, {"b", 1, true}, {"y", 2, false}, {"z", 2, false}},
      cap);
}

// Reference sign for sorting a generator word: bubble sort counting swaps of
// two odd generators; zero if a repeated odd generator appears.
int word_sign(const GenTable& tab, std::vector<int> word) {
  long long swaps = 0;
  for (size_t i = 0; i < word.size(); ++i)
    for (size_t j = 0; j + 1 < word.size() - i; ++j)
      if (word[j] > word[j + 1]) {
        if (tab.gen(word[j]).odd && tab.gen(word[j + 1]).odd) ++swaps;
        std::swap(word[j], word[j + 1]);
      }
  for (size_t k = 0; k + 1 < word.size(); ++k)
    if (word[k] == word[k + 1] && tab.gen(word[k]).odd) return 0;
  return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace

TEST_CASE("even generator square and exponential") {
  auto tab = even_table(5);
  auto one = Graded<Rat>::scalar(tab, Rat(1));
  auto y = Graded<Rat>::generator(tab, "y");

  auto f = one + y * y;
  auto sq = f * f;  // y^4 has degree 8 and falls past the cap
  CHECK(sq.coeff({}) == Rat(1));
  CHECK(sq.coeff({0, 0}) == Rat(2));
  CHECK(sq.terms().size() == 2);

  auto ey = y.exp();
  CHECK(ey.coeff({}) == Rat(1));
  CHECK(ey.coeff({0}) == Rat(1));
  CHECK(ey.coeff({0, 0}) == Rat(1, 2));
  CHECK(ey.terms().size() == 3);

  CHECK_THROWS_AS(f.exp(), std::domain_error);
}

TEST_CASE("odd generators anticommute and square to zero") {
  auto tab = mixed_table(6);
  auto a = Graded<Rat>::generator(tab, "a");
  auto b = Graded<Rat>::generator(tab, "b");
  auto y = Graded<Rat>::generator(tab, "y");

  CHECK((a * a).empty());
  CHECK((a * b + b * a).empty());
  CHECK((a * b).coeff({0, 1}) == Rat(1));
  CHECK((b * a).coeff({0, 1}) == Rat(-1));
  CHECK(((a + b) * (a + b)).empty());

  CHECK((a * y - y * a).empty());
  CHECK((y * a).coeff({0, 2}) == Rat(1));

  auto tab2 = mixed_table(6);
  auto c = Graded<Rat>::generator(tab2, "a");
  CHECK_THROWS_AS(a * c, std::invalid_argument);
}

TEST_CASE("products of random words carry the reference sign") {
  auto tab = mixed_table(12);
  std::mt19937 rng(7u);
  std::uniform_int_distribution<int> pick(0, tab->size() - 1);
  std::uniform_int_distribution<int> len(1, 5);
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<int> word(len(rng));
    for (int& g : word) g = pick(rng);

    auto prod = Graded<Rat>::scalar(tab, Rat(1));
    for (int g : word) prod *= Graded<Rat>::generator(tab, g);

    int sign = word_sign(*tab, word);
    std::vector<int> sorted = word;
    std::sort(sorted.begin(), sorted.end());
    int degree = 0;
    for (int g : sorted) degree += tab->gen(g).degree;
    if (sign == 0 || degree > tab->degree_cap()) {
      CHECK(prod.empty());
    } else {
      CHECK(prod.coeff(sorted) == Rat(sign));
      CHECK(prod.terms().size() == 1);
    }
  }
}

TEST_CASE("supercommutativity on homogeneous elements") {
  auto tab = mixed_table(12);
  std::mt19937 rng(11u);
  std::uniform_int_distribution<int> pick(0, tab->size() - 1);
  std::uniform_int_distribution<int> len(1, 3);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<int> wa(len(rng)), wb(len(rng));
    for (int& g : wa) g = pick(rng);
    for (int& g : wb) g = pick(rng);
    auto ma = Graded<Rat>::scalar(tab, Rat(1));
    for (int g : wa) ma *= Graded<Rat>::generator(tab, g);
    auto mb = Graded<Rat>::scalar(tab, Rat(1));
    for (int g : wb) mb *= Graded<Rat>::generator(tab, g);

    int odd_a = 0, odd_b = 0;
    for (int g : wa) odd_a += tab->gen(g).odd ? 1 : 0;
    for (int g : wb) odd_b += tab->gen(g).odd ? 1 : 0;
    bool flip = (odd_a % 2 == 1) && (odd_b % 2 == 1);
    auto diff = flip ? (ma * mb + mb * ma) : (ma * mb - mb * ma);
    CHECK(diff.empty());
  }
}

TEST_CASE("degree parts and scalar coefficient rings") {
  auto tab = mixed_table(6);
  auto a = Graded<Rat>::generator(tab, "a");
  auto y = Graded<Rat>::generator(tab, "y");
  auto e = Graded<Rat>::scalar(tab, Rat(3)) + a + y + y * y;
  CHECK(e.degree_part(0).coeff({}) == Rat(3));
  CHECK(e.degree_part(1).coeff({0}) == Rat(1));
  CHECK(e.degree_part(4).coeff({2, 2}) == Rat(1));
  CHECK(e.degree_part(3).empty());

  auto tabq = even_table(4);
  QSeriesC s = QSeriesC::one(13);
  s.add_to(2, Cplx(1.0, 0.0));
  auto gy = GradedC::generator(tabq, "y").scaled(s);
  auto ge = gy.exp();
  CHECK(std::abs(ge.coeff({}).at(0) - Cplx(1.0, 0.0)) == 0.0);
  CHECK(std::abs(ge.coeff({0}).at(2) - Cplx(1.0, 0.0)) == 0.0);
  // coefficient of y^2: (1+q)^2 / 2
  CHECK(std::abs(ge.coeff({0, 0}).at(2) - Cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(ge.coeff({0, 0}).at(4) - Cplx(0.5, 0.0)) < 1e-15);
  CHECK(ge.coeff({0, 0, 0}).empty());
}
