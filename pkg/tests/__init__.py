# syncmdp test package
