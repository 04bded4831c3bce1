u8 main(u8 xs[4]) {
  u8 sum = 0;
  for (u8 i = 0; i < 4; i++) {
    sum += xs[i];
  }
  return sum;
}
