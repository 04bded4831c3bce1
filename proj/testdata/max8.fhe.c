u8 main(u8 a, u8 b) {
  u8 best = a;
  if (a < b) {
    best = b;
  }
  return best;
}
