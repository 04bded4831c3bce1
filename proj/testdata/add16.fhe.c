u16 main(u16 a, u16 b) {
  return a + b;
}
