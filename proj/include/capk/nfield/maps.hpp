#pragma once

#include "capk/nfield/ideal.hpp"

namespace capk {

// x -> x * matrix() on integral-basis coordinates.
class FieldAutomorphism {
 public:
  FieldAutomorphism() = default;
  // Verifies f(image) = 0, integrality, invertibility and multiplicativity on basis pairs.
  FieldAutomorphism(const NumberField& K, const FieldElement& image_of_theta);

  const FieldElement& image() const { return image_; }
  const IntMatrix& matrix() const { return M_; }
  FieldElement apply(const FieldElement& x) const;
  IdealHNF apply(const NumberField& K, const IdealHNF& a) const;
  bool operator==(const FieldAutomorphism& o) const { return M_ == o.M_; }

 private:
  FieldElement image_;
  IntMatrix M_;
};

FieldAutomorphism compose(const FieldAutomorphism& first, const FieldAutomorphism& second, const NumberField& K);

// F -> K given by the image of F's generator.
class FieldEmbedding {
 public:
  FieldEmbedding() = default;
  FieldEmbedding(const NumberField& F, const NumberField& K, const FieldElement& image_of_theta);

  const IntMatrix& matrix() const { return E_; }
  FieldElement apply(const FieldElement& x) const;
  // a O_K
  IdealHNF extend(const NumberField& K, const IdealHNF& a) const;

 private:
  IntMatrix E_;
};

}  // namespace capk
