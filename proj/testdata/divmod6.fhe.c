// Quotient and remainder in one pass; division by zero follows the
// all-ones / identity convention.
struct QuotRem {
  u6 quot;
  u6 rem;
};

QuotRem main(u6 a, u6 b) {
  QuotRem out;
  out.quot = a / b;
  out.rem = a % b;
  return out;
}
