u8 main(u8 a, u8 b) {
  u8 t = (a & b) ^ (a | ~b);
  return (t << 2) | (t >> 3);
}
