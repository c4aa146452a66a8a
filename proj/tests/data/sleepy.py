#!/usr/bin/env python3
import time

time.sleep(30)
print(1.0)
