struct Point {
  i8 x;
  i8 y;
};

i8 abs8(i8 v) {
  if (v < 0) {
    return -v;
  }
  return v;
}

// Manhattan norm of a point; calls are inlined into one dataflow graph.
i8 main(Point p) {
  return abs8(p.x) + abs8(p.y);
}
