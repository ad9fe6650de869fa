"""Maximum-volume inscribed boxes and rectangles in convex sets."""
