bool main(i6 a, i6 b) {
  return a < b || a == -b;
}
