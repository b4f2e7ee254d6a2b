from .lfu import LFUCache
