// Dessin computation (in progress).
