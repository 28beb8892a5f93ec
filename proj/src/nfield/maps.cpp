#include "capk/nfield/maps.hpp"

#include "capk/errors.hpp"

namespace capk {

namespace {

// Images of the integral basis of `src` once theta_src maps to `img` in `dst`.
IntMatrix basis_images(const NumberField& src, const NumberField& dst, const FieldElement& img, const std::string& what) {
  int ds = src.degree();
  std::vector<FieldElement> powers{dst.one()};
  for (int k = 1; k < ds; ++k) powers.push_back(dst.mul(powers.back(), img));
  IntMatrix M(ds, dst.degree());
  for (int i = 0; i < ds; ++i) {
    FieldElement acc = dst.zero();
    for (int k = 0; k < ds; ++k) acc = dst.add(acc, dst.scale(powers[k], src.basis()(i, k)));
    if (!acc.is_integral()) fail(ErrorKind::ValidationError, what + ": image of an integral basis element is not integral");
    M.set_row(i, acc.num);
  }
  QPoly f = to_q(src.polynomial());
  if (!dst.eval(f, img).is_zero()) fail(ErrorKind::ValidationError, what + ": image is not a root of the defining polynomial");
  return M;
}

}  // namespace

FieldAutomorphism::FieldAutomorphism(const NumberField& K, const FieldElement& image_of_theta) : image_(image_of_theta) {
  M_ = basis_images(K, K, image_, "automorphism " + image_.str());
  if (abs(determinant(M_)) != 1) fail(ErrorKind::ValidationError, "automorphism " + image_.str() + " is not bijective on O_K");
  int d = K.degree();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      FieldElement wi = K.basis_element(i), wj = K.basis_element(j);
      if (apply(K.mul(wi, wj)) != K.mul(apply(wi), apply(wj)))
        fail(ErrorKind::ValidationError, "automorphism " + image_.str() + " is not multiplicative");
    }
}

FieldElement FieldAutomorphism::apply(const FieldElement& x) const { return FieldElement(vec_mul(x.num, M_), x.den); }

IdealHNF FieldAutomorphism::apply(const NumberField& K, const IdealHNF& a) const {
  std::vector<FieldElement> gens;
  for (auto& b : ideal_basis(a)) gens.push_back(apply(b));
  return ideal_from_generators(K, gens);
}

FieldAutomorphism compose(const FieldAutomorphism& first, const FieldAutomorphism& second, const NumberField& K) {
  return FieldAutomorphism(K, second.apply(first.image()));
}

FieldEmbedding::FieldEmbedding(const NumberField& F, const NumberField& K, const FieldElement& image_of_theta) {
  E_ = basis_images(F, K, image_of_theta, "embedding");
  int d = F.degree();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      FieldElement wi = F.basis_element(i), wj = F.basis_element(j);
      if (apply(F.mul(wi, wj)) != K.mul(apply(wi), apply(wj)))
        fail(ErrorKind::ValidationError, "embedding is not multiplicative");
    }
}

FieldElement FieldEmbedding::apply(const FieldElement& x) const { return FieldElement(vec_mul(x.num, E_), x.den); }

IdealHNF FieldEmbedding::extend(const NumberField& K, const IdealHNF& a) const {
  std::vector<FieldElement> gens;
  for (auto& b : ideal_basis(a)) gens.push_back(apply(b));
  return ideal_from_generators(K, gens);
}

}  // namespace capk
