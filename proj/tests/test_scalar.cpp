#include "doctest.h"
#include "pcm/scalar.hpp"

using namespace pcm;

TEST_CASE("gaussian rational arithmetic is exact") {
  ExpCoeff a(Rat(1, 3), Rat(1, 2));
  ExpCoeff b(Rat(2, 3), Rat(-1, 2));
  ExpCoeff sum = a + b;
  CHECK(sum == ExpCoeff(1));
  ExpCoeff prod = ExpCoeff::i() * ExpCoeff::i();
  CHECK(prod == ExpCoeff(-1));
  ExpCoeff inv = ExpCoeff(Rat(1), Rat(1)).inverse();  // 1/(1+i) = (1-i)/2
  CHECK(inv == ExpCoeff(Rat(1, 2), Rat(-1, 2)));
}

TEST_CASE("equality is symbolic and decidable") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  IrrRegistry::instance().declare("log2", {IrrDef::Log, Rat(2)});
  ExpCoeff r2 = ExpCoeff::irrational("sqrt2");
  CHECK(r2 == ExpCoeff::irrational("sqrt2"));
  CHECK(r2 != ExpCoeff::irrational("log2"));
  CHECK((r2 - r2).is_zero());
  CHECK(r2.real_part() == r2);
  CHECK(r2.imag_part().is_zero());
}

TEST_CASE("order comparisons refine intervals") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  ExpCoeff r2 = ExpCoeff::irrational("sqrt2");
  CHECK(ExpCoeff::cmp_real(r2, ExpCoeff(Rat(141421356, 100000000))) > 0);
  CHECK(ExpCoeff::cmp_real(r2, ExpCoeff(Rat(141421357, 100000000))) < 0);
  CHECK(r2.sign_real() == 1);
  CHECK((-r2).sign_real() == -1);
  CHECK(r2.floor_real() == 1);
  CHECK((ExpCoeff(Rat(3)) * r2).floor_real() == 4);  // 3*sqrt2 ~ 4.24
}

TEST_CASE("identical-value distinct constants stay undecidable") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  IrrRegistry::instance().declare("sqrt8", {IrrDef::Sqrt, Rat(8)});
  // sqrt8 - 2*sqrt2 is numerically zero but symbolically distinct: the sign
  // query must refuse rather than guess
  ExpCoeff v = ExpCoeff::irrational("sqrt8") - ExpCoeff(Rat(2)) * ExpCoeff::irrational("sqrt2");
  CHECK(!v.is_zero());
  CHECK_THROWS_AS(v.sign_real(), undecidable_error);
}

TEST_CASE("sqrt products resolve, log products refuse") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  IrrRegistry::instance().declare("sqrt3", {IrrDef::Sqrt, Rat(3)});
  IrrRegistry::instance().declare("log2", {IrrDef::Log, Rat(2)});
  ExpCoeff r2 = ExpCoeff::irrational("sqrt2");
  ExpCoeff r3 = ExpCoeff::irrational("sqrt3");
  CHECK((r2 * r2) == ExpCoeff(2));
  ExpCoeff r6 = r2 * r3;
  CHECK(std::abs(r6.approx().real() - std::sqrt(6.0)) < 1e-12);
  // sqrt(2)*sqrt(8) = 4 exactly after square extraction
  IrrRegistry::instance().declare("sqrt8", {IrrDef::Sqrt, Rat(8)});
  CHECK((r2 * ExpCoeff::irrational("sqrt8")) == ExpCoeff(4));
  ExpCoeff l2 = ExpCoeff::irrational("log2");
  CHECK_THROWS_AS(l2 * l2, unsupported_error);
}

TEST_CASE("inverse by conjugation with one sqrt constant") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  ExpCoeff v = ExpCoeff(1) + ExpCoeff::irrational("sqrt2");  // 1 + sqrt2
  ExpCoeff inv = v.inverse();                                 // sqrt2 - 1
  CHECK((v * inv) == ExpCoeff(1));
  CHECK(std::abs(inv.approx().real() - (std::sqrt(2.0) - 1.0)) < 1e-12);
}

TEST_CASE("integrality queries") {
  IrrRegistry::instance().declare("sqrt2", {IrrDef::Sqrt, Rat(2)});
  CHECK(ExpCoeff(Rat(5)).try_integer().value() == 5);
  CHECK(!ExpCoeff(Rat(5, 2)).try_integer().has_value());
  CHECK(!ExpCoeff(Rat(0), Rat(1)).try_integer().has_value());
  CHECK(!ExpCoeff::irrational("sqrt2").try_integer().has_value());
}

TEST_CASE("json form is canonical") {
  ExpCoeff a(Rat(1, 3), Rat(-2, 5));
  CHECK(a.json() ==
        "{\"re_num\":\"1\",\"re_den\":\"3\",\"im_num\":\"-2\",\"im_den\":\"5\"}");
}
