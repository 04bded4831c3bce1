u8 main(u8 a, u8 b) {
  return a - b;
}
