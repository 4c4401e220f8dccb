# Features test package
