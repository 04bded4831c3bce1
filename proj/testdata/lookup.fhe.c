// Data-dependent array read; compiles to a select chain, not an access.
u8 main(u8 xs[4], u2 i) {
  return xs[i];
}
